"""Line-oriented text format for Bayesian games.

::

    game G7
    players 2
    types A: x1 x2
    types B: y1 y2
    actions A: 1 2
    actions B: 1 2
    prior uniform
    allow x1 y1 : 1,1 1,2 2,1 2,2

``#`` starts a comment.  ``prior <types> = p/q`` lines may replace
``prior uniform``; profiles left out get probability zero.  Omitting the
prior altogether means uniform.
"""

from __future__ import annotations

import re
from itertools import product
from fractions import Fraction
from pathlib import Path

from .model import BayesianGame, GameError

_LABEL = re.compile(r"[^\s,:=#]+")


class GameFormatError(GameError):
    """Syntax or semantic error in a game document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.detail = message


class _Line:
    def __init__(self, number: int, raw: str):
        self.number = number
        self.raw = raw
        self.text = raw.split("#", 1)[0].rstrip()

    def error(self, message: str, token: str | None = None, start: int = 0) -> GameFormatError:
        col = None
        if token is not None:
            idx = self.raw.find(token, start)
            col = idx + 1 if idx >= 0 else None
        return GameFormatError(message, self.number, col)

    def labels(self, chunk: str, offset: int) -> list[str]:
        out = []
        for match in re.finditer(r"\S+", chunk):
            tok = match.group()
            if not _LABEL.fullmatch(tok):
                raise GameFormatError(f"bad label {tok!r}", self.number,
                                      offset + match.start() + 1)
            out.append(tok)
        return out


def _split_colon(line: _Line, keyword: str) -> tuple[str, str, int]:
    body = line.text[len(keyword):]
    if ":" not in body:
        raise GameFormatError(f"expected ':' in {keyword} directive", line.number,
                              len(line.text) + 1)
    head, tail = body.split(":", 1)
    return head.strip(), tail, len(keyword) + len(head) + 1


def parse_game(text: str) -> BayesianGame:
    lines = [_Line(i, raw) for i, raw in enumerate(text.splitlines(), start=1)]
    lines = [ln for ln in lines if ln.text.strip()]
    if not lines:
        raise GameFormatError("empty document", 1, 1)

    name = None
    n_players = None
    players: list[str] = []
    types: dict[str, list[str]] = {}
    actions: dict[str, list[str]] = {}
    prior_uniform = False
    prior: dict[tuple, Fraction] = {}
    allowed: dict[tuple, frozenset] = {}

    for idx, ln in enumerate(lines):
        stripped = ln.text.strip()
        keyword = stripped.split()[0]
        indent = len(ln.text) - len(ln.text.lstrip())
        if idx == 0 and keyword != "game":
            raise ln.error("document must start with 'game <name>'", keyword)
        text = ln.text.lstrip()
        ln_body = _Line(ln.number, ln.raw)
        ln_body.text = text

        if keyword == "game":
            if name is not None:
                raise ln.error("repeated 'game' directive", keyword)
            rest = text.split()[1:]
            if len(rest) != 1 or not _LABEL.fullmatch(rest[0]):
                raise ln.error("expected 'game <name>'", keyword)
            name = rest[0]
        elif keyword == "players":
            rest = text.split()[1:]
            if n_players is not None:
                raise ln.error("repeated 'players' directive", keyword)
            if len(rest) != 1 or not rest[0].isdigit() or int(rest[0]) < 1:
                raise ln.error("expected 'players <n>' with n >= 1", keyword)
            n_players = int(rest[0])
        elif keyword in ("types", "actions"):
            if n_players is None:
                raise ln.error(f"'{keyword}' before 'players'", keyword)
            label, tail, offset = _split_colon(ln_body, keyword)
            if not _LABEL.fullmatch(label or ""):
                raise ln.error(f"bad player label {label!r}", keyword)
            values = ln_body.labels(tail, indent + offset)
            if not values:
                raise ln.error(f"player {label} declares no {keyword}", keyword)
            if len(set(values)) != len(values):
                raise ln.error(f"duplicate {keyword} label for player {label}", keyword)
            if keyword == "types":
                if label in types:
                    raise ln.error(f"types for player {label} declared twice", label)
                if len(players) == n_players:
                    raise ln.error(f"more than {n_players} players declared", label)
                players.append(label)
                types[label] = values
            else:
                if label not in types:
                    raise ln.error(f"unknown player label {label!r}", label)
                if label in actions:
                    raise ln.error(f"actions for player {label} declared twice", label)
                actions[label] = values
        elif keyword == "prior":
            _require_spaces(ln, n_players, players, types, actions)
            rest = text[len("prior"):].strip()
            if rest == "uniform":
                if prior:
                    raise ln.error("'prior uniform' mixed with explicit entries", keyword)
                prior_uniform = True
                continue
            if prior_uniform:
                raise ln.error("explicit prior entry after 'prior uniform'", keyword)
            if "=" not in rest:
                raise ln.error("expected 'prior uniform' or 'prior <types> = p/q'", keyword)
            head, value = rest.split("=", 1)
            tp = _type_profile(ln, head.split(), players, types)
            if tp in prior:
                raise ln.error(f"duplicate prior entry for {' '.join(tp)}", head.split()[0])
            try:
                p = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise ln.error(f"bad probability {value.strip()!r}", value.strip()) from None
            if p < 0:
                raise ln.error("negative probability", value.strip())
            prior[tp] = p
        elif keyword == "allow":
            _require_spaces(ln, n_players, players, types, actions)
            head, tail, offset = _split_colon(ln_body, keyword)
            tp = _type_profile(ln, head.split(), players, types)
            if tp in allowed:
                raise ln.error(f"duplicate type profile {' '.join(tp)}", head.split()[0])
            profiles = set()
            for match in re.finditer(r"\S+", tail):
                tok = match.group()
                col = indent + offset + match.start() + 1
                parts = tok.split(",")
                if len(parts) != len(players) or not all(_LABEL.fullmatch(p) for p in parts):
                    raise GameFormatError(
                        f"expected {len(players)} comma-separated actions, got {tok!r}",
                        ln.number, col)
                for label, a in zip(players, parts):
                    if a not in actions[label]:
                        raise GameFormatError(
                            f"unknown action {a!r} for player {label}", ln.number, col)
                profiles.add(tuple(parts))
            allowed[tp] = frozenset(profiles)
        else:
            raise ln.error(f"unknown directive {keyword!r}", keyword)

    last = lines[-1].number
    if n_players is None:
        raise GameFormatError("missing 'players' directive", last)
    _require_spaces(lines[-1], n_players, players, types, actions)
    type_spaces = [types[p] for p in players]

    for tp in product(*type_spaces):
        if tp not in allowed:
            raise GameFormatError(f"missing type profile {' '.join(tp)}", last)

    the_prior = None
    if prior:
        total = sum(prior.values())
        if total != 1:
            raise GameFormatError(f"prior sums to {total}, not 1", last)
        the_prior = prior
    try:
        return BayesianGame(name, tuple(players), tuple(tuple(t) for t in type_spaces),
                            tuple(tuple(actions[p]) for p in players), allowed, the_prior)
    except GameError as exc:
        raise GameFormatError(str(exc), last) from None


def _require_spaces(ln: _Line, n_players, players, types, actions) -> None:
    if n_players is None:
        raise ln.error("missing 'players' directive", ln.text.split()[0])
    if len(players) != n_players:
        raise ln.error(f"expected types for {n_players} players, found {len(players)}",
                       ln.text.split()[0])
    for p in players:
        if p not in actions:
            raise ln.error(f"missing actions for player {p}", ln.text.split()[0])


def _type_profile(ln: _Line, tokens: list[str], players, types) -> tuple:
    if len(tokens) != len(players):
        raise ln.error(f"expected {len(players)} type labels, got {len(tokens)}",
                       tokens[0] if tokens else None)
    start = ln.raw.find(ln.text.split()[0]) + len(ln.text.split()[0])
    for label, t in zip(players, tokens):
        if t not in types[label]:
            raise ln.error(f"unknown type {t!r} for player {label}", t, start)
    return tuple(tokens)


def _fmt_row(keyword: str, label: str, values) -> str:
    return f"{keyword} {label}: {' '.join(values)}"


def serialize_game(g: BayesianGame) -> str:
    """Canonical text form.  Byte-stable for a given game value."""
    out = [f"game {g.name}", f"players {g.n_players}"]
    out += [_fmt_row("types", p, ts) for p, ts in zip(g.players, g.type_spaces)]
    out += [_fmt_row("actions", p, acts) for p, acts in zip(g.players, g.action_spaces)]
    if g.has_uniform_prior():
        out.append("prior uniform")
    else:
        for tp in g.type_profiles():
            out.append(f"prior {' '.join(tp)} = {g.prior[tp]}")
    index = [{a: k for k, a in enumerate(acts)} for acts in g.action_spaces]
    for tp in g.type_profiles():
        acts = sorted(g.allowed[tp], key=lambda ap: [index[i][a] for i, a in enumerate(ap)])
        body = " ".join(",".join(ap) for ap in acts)
        out.append(f"allow {' '.join(tp)} :" + (f" {body}" if body else ""))
    return "\n".join(out) + "\n"


def load_game(path: str | Path) -> BayesianGame:
    return parse_game(Path(path).read_text(encoding="utf-8"))
