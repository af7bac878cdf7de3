"""Built-in games G1 through G7, plus the alternate G7 variant."""

from __future__ import annotations

import itertools

from .model import BayesianGame, GameError


class UnknownGameError(GameError):
    def __init__(self, name: str):
        super().__init__(
            f"unknown game {name!r}; available: {', '.join(available_games())}"
        )
        self.name = name


def _pairs(text: str) -> frozenset:
    """``"1,1 / 1,2"`` -> {("1","1"), ("1","2")}."""
    items = [chunk.strip() for chunk in text.split("/") if chunk.strip()]
    return frozenset(tuple(item.split(",")) for item in items)


def _g1() -> BayesianGame:
    return BayesianGame("G1", ("A", "B"), (("t",), ("t",)), (("0", "1"), ("0", "1")),
                        {("t", "t"): _pairs("0,0")})


def _g2() -> BayesianGame:
    return BayesianGame("G2", ("A", "B"), (("t",), ("t",)), (("0", "1"), ("0", "1")),
                        {("t", "t"): _pairs("0,0 / 1,1")})


def _g3() -> BayesianGame:
    allowed = {(x, y): frozenset({(x, y)}) for x in "01" for y in "01"}
    return BayesianGame("G3", ("A", "B"), (("0", "1"), ("0", "1")),
                        (("0", "1"), ("0", "1")), allowed)


def _g4() -> BayesianGame:
    same = _pairs("0,0 / 1,1")
    diff = _pairs("0,1 / 1,0")
    allowed = {(x, y): same if x == y else diff for x in "01" for y in "01"}
    return BayesianGame("G4", ("A", "B"), (("0", "1"), ("0", "1")),
                        (("0", "1"), ("0", "1")), allowed)


_G5_TABLE = {
    ("x1", "y1"): "1,1 / 1,2 / 2,1 / 2,2 / 3,3 / 3,4 / 4,3 / 4,4",
    ("x1", "y2"): "1,1 / 1,2 / 2,3 / 2,4 / 3,1 / 3,2 / 4,3 / 4,4",
    ("x1", "y3"): "1,1 / 1,2 / 2,3 / 2,4 / 3,3 / 3,4 / 4,1 / 4,2",
    ("x2", "y1"): "1,1 / 1,3 / 2,1 / 2,3 / 3,2 / 3,4 / 4,2 / 4,4",
    ("x2", "y2"): "1,1 / 1,3 / 2,2 / 2,4 / 3,1 / 3,3 / 4,2 / 4,4",
    ("x2", "y3"): "1,1 / 1,3 / 2,2 / 2,4 / 3,2 / 3,4 / 4,1 / 4,3",
    ("x3", "y1"): "1,1 / 1,4 / 2,1 / 2,4 / 3,2 / 3,3 / 4,2 / 4,3",
    ("x3", "y2"): "1,1 / 1,4 / 2,2 / 2,3 / 3,1 / 3,4 / 4,2 / 4,3",
    ("x3", "y3"): "1,2 / 1,3 / 2,1 / 2,4 / 3,1 / 3,4 / 4,2 / 4,3",
}


def _g5() -> BayesianGame:
    acts = ("1", "2", "3", "4")
    return BayesianGame("G5", ("A", "B"), (("x1", "x2", "x3"), ("y1", "y2", "y3")),
                        (acts, acts), {tp: _pairs(s) for tp, s in _G5_TABLE.items()})


def _g6() -> BayesianGame:
    every = frozenset(itertools.product("12", repeat=3))
    even = _pairs("1,1,1 / 1,2,2 / 2,1,2 / 2,2,1")
    odd = _pairs("1,1,2 / 1,2,1 / 2,1,1 / 2,2,2")
    table = {
        ("x1", "y1", "z1"): even,
        ("x1", "y2", "z1"): every,
        ("x2", "y1", "z1"): every,
        ("x2", "y2", "z1"): odd,
        ("x1", "y1", "z2"): every,
        ("x1", "y2", "z2"): odd,
        ("x2", "y1", "z2"): odd,
        ("x2", "y2", "z2"): every,
    }
    return BayesianGame("G6", ("A", "B", "C"),
                        (("x1", "x2"), ("y1", "y2"), ("z1", "z2")),
                        (("1", "2"),) * 3, table)


def _g7() -> BayesianGame:
    table = {
        ("x1", "y1"): _pairs("1,1 / 1,2 / 2,1 / 2,2"),
        ("x1", "y2"): _pairs("1,1 / 2,1 / 2,2"),
        ("x2", "y1"): _pairs("1,1 / 1,2 / 2,2"),
        ("x2", "y2"): _pairs("1,2 / 2,1 / 2,2"),
    }
    return BayesianGame("G7", ("A", "B"), (("x1", "x2"), ("y1", "y2")),
                        (("1", "2"), ("1", "2")), table)


def _g7_appendix() -> BayesianGame:
    # alternate sets; they differ from G7 at (x1,y1) and (x2,y1)
    table = {
        ("x1", "y1"): _pairs("1,1 / 1,2 / 2,2"),
        ("x1", "y2"): _pairs("1,1 / 2,1 / 2,2"),
        ("x2", "y1"): _pairs("1,1 / 2,1 / 2,2"),
        ("x2", "y2"): _pairs("1,2 / 2,1 / 2,2"),
    }
    return BayesianGame("G7_appendix", ("A", "B"), (("x1", "x2"), ("y1", "y2")),
                        (("1", "2"), ("1", "2")), table)


_BUILDERS = {
    "G1": _g1,
    "G2": _g2,
    "G3": _g3,
    "G4": _g4,
    "G5": _g5,
    "G6": _g6,
    "G7": _g7,
    "G7_appendix": _g7_appendix,
}


def available_games() -> list[str]:
    return list(_BUILDERS)


def registry_get(name: str) -> BayesianGame:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownGameError(name) from None
