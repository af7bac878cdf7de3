"""Exhaustive analysis of classical (local hidden variable) strategies.

A classical strategy is shared randomness plus one deterministic response
table per player.  Both questions answered here reduce to deterministic
tables:

* the error of a mixture is the weight-average of its members' errors, so
  the minimum over mixtures is attained by a single table;
* a mixture that never leaves the allowed sets can only contain tables that
  never leave them, so strong feasibility is a covering question over the
  set of zero-error tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .game import ActionProfile, BayesianGame, TypeProfile

DEFAULT_CAP = 10**8


class EnumerationLimitError(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(
            f"refusing to enumerate {size} deterministic profiles (cap {cap})"
        )
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class DeterministicProfile:
    """One response table per player.

    ``tables[i][k]`` is the action player ``i`` plays on their ``k``-th type.
    Ordering follows action declaration order when built by :func:`enumerate_profiles`.
    """

    tables: tuple[tuple[str, ...], ...]

    def play(self, game: BayesianGame, tp: TypeProfile) -> ActionProfile:
        return tuple(
            self.tables[i][game.type_spaces[i].index(t)] for i, t in enumerate(tp)
        )

    def as_dict(self, game: BayesianGame) -> dict[str, dict[str, str]]:
        return {
            p: dict(zip(ts, table))
            for p, ts, table in zip(game.players, game.type_spaces, self.tables)
        }


@dataclass(frozen=True)
class LhvModel:
    support: tuple[DeterministicProfile, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.weights) or not self.support:
            raise ValueError("support and weights must be nonempty and equally long")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support entries must be distinct")
        if any(w <= 0 for w in self.weights) or sum(self.weights) != 1:
            raise ValueError("weights must be positive and sum to 1")

    @classmethod
    def uniform(cls, support: Sequence[DeterministicProfile]) -> "LhvModel":
        w = Fraction(1, len(support))
        return cls(tuple(support), tuple(w for _ in support))

    def distribution(self, game: BayesianGame, tp: TypeProfile) -> dict[ActionProfile, Fraction]:
        out: dict[ActionProfile, Fraction] = {}
        for prof, w in zip(self.support, self.weights):
            ap = prof.play(game, tp)
            out[ap] = out.get(ap, Fraction(0)) + w
        return out


@dataclass
class FeasibilityReport:
    game: str
    strong: bool
    feasible: bool
    profiles_enumerated: int
    zero_error_found: int
    witness: DeterministicProfile | LhvModel | None = None
    certificates: list[tuple[DeterministicProfile, TypeProfile]] = field(default_factory=list)
    empty_type_profiles: list[TypeProfile] = field(default_factory=list)
    zero_error_profiles: list[DeterministicProfile] = field(default_factory=list)
    uncovered: list[tuple[TypeProfile, ActionProfile]] = field(default_factory=list)

    def to_dict(self, game: BayesianGame) -> dict:
        def prof(p: DeterministicProfile) -> dict:
            return p.as_dict(game)

        witness = None
        if isinstance(self.witness, DeterministicProfile):
            witness = {"kind": "deterministic", "profile": prof(self.witness)}
        elif isinstance(self.witness, LhvModel):
            witness = {
                "kind": "mixture",
                "support": [prof(p) for p in self.witness.support],
                "weights": [str(w) for w in self.witness.weights],
            }
        out = {
            "game": self.game,
            "check": "strong" if self.strong else "zero-error",
            "verdict": "feasible" if self.feasible else "infeasible",
            "profiles_enumerated": self.profiles_enumerated,
            "zero_error_found": self.zero_error_found,
            "witness": witness,
            "empty_type_profiles": [list(tp) for tp in self.empty_type_profiles],
            "certificates": [
                {"profile": prof(p), "fails_at": list(tp)} for p, tp in self.certificates
            ],
        }
        if self.strong:
            out["zero_error_profiles"] = [prof(p) for p in self.zero_error_profiles]
            out["uncovered"] = [
                {"type_profile": list(tp), "action": list(ap)} for tp, ap in self.uncovered
            ]
        return out


def enumeration_size(game: BayesianGame) -> int:
    return math.prod(
        len(acts) ** len(ts) for acts, ts in zip(game.action_spaces, game.type_spaces)
    )


def enumerate_profiles(game: BayesianGame, cap: int = DEFAULT_CAP) -> Iterator[DeterministicProfile]:
    """All deterministic profiles in lexicographic (declaration-index) order."""
    size = enumeration_size(game)
    if size > cap:
        raise EnumerationLimitError(size, cap)
    per_player = [
        list(itertools.product(acts, repeat=len(ts)))
        for acts, ts in zip(game.action_spaces, game.type_spaces)
    ]
    for tables in itertools.product(*per_player):
        yield DeterministicProfile(tuple(tables))


def first_failure(game: BayesianGame, profile: DeterministicProfile) -> TypeProfile | None:
    for tp in game.type_profiles():
        if profile.play(game, tp) not in game.allowed[tp]:
            return tp
    return None


def profile_error(game: BayesianGame, profile: DeterministicProfile,
                  prior: Mapping[TypeProfile, Fraction] | None = None) -> Fraction:
    prior = game.prior if prior is None else prior
    return sum(
        (prior[tp] for tp in game.type_profiles()
         if profile.play(game, tp) not in game.allowed[tp]),
        Fraction(0),
    )


def lhv_error(game: BayesianGame, model: LhvModel,
              prior: Mapping[TypeProfile, Fraction] | None = None) -> Fraction:
    """Error of a mixture, computed from its joint action distribution."""
    prior = game.prior if prior is None else prior
    total = Fraction(0)
    for tp in game.type_profiles():
        dist = model.distribution(game, tp)
        total += prior[tp] * sum(
            (p for ap, p in dist.items() if ap not in game.allowed[tp]), Fraction(0)
        )
    return total


def _empty(game: BayesianGame) -> list[TypeProfile]:
    return [tp for tp in game.type_profiles() if not game.allowed[tp]]


def solve_zero_error(game: BayesianGame, cap: int = DEFAULT_CAP) -> FeasibilityReport:
    empty = _empty(game)
    if empty:
        return FeasibilityReport(game.name, False, False, 0, 0, empty_type_profiles=empty)
    certificates = []
    witness = None
    enumerated = found = 0
    for prof in enumerate_profiles(game, cap):
        enumerated += 1
        tp = first_failure(game, prof)
        if tp is None:
            found += 1
            if witness is None:
                witness = prof
        else:
            certificates.append((prof, tp))
    if witness is not None:
        certificates = []
    return FeasibilityReport(game.name, False, witness is not None, enumerated, found,
                             witness=witness, certificates=certificates)


def min_error(game: BayesianGame, prior: Mapping[TypeProfile, Fraction] | None = None,
              cap: int = DEFAULT_CAP) -> Fraction:
    """Smallest prior-weighted error over all deterministic profiles (exact)."""
    best = None
    for prof in enumerate_profiles(game, cap):
        err = profile_error(game, prof, prior)
        if best is None or err < best:
            best = err
            if best == 0:
                break
    return best


def zero_error_set(game: BayesianGame, cap: int = DEFAULT_CAP) -> list[DeterministicProfile]:
    return [p for p in enumerate_profiles(game, cap) if first_failure(game, p) is None]


def solve_strong_zero_error(game: BayesianGame, cap: int = DEFAULT_CAP) -> FeasibilityReport:
    """Every allowed outcome must be reachable, every other outcome impossible."""
    empty = _empty(game)
    if empty:
        return FeasibilityReport(game.name, True, False, 0, 0, empty_type_profiles=empty)
    certificates = []
    zero = []
    enumerated = 0
    for prof in enumerate_profiles(game, cap):
        enumerated += 1
        tp = first_failure(game, prof)
        if tp is None:
            zero.append(prof)
        else:
            certificates.append((prof, tp))

    index = [{a: k for k, a in enumerate(acts)} for acts in game.action_spaces]
    targets = [
        (tp, ap)
        for tp in game.type_profiles()
        for ap in sorted(game.allowed[tp],
                         key=lambda ap: [index[i][a] for i, a in enumerate(ap)])
    ]
    reach = {prof: {(tp, prof.play(game, tp)) for tp in game.type_profiles()} for prof in zero}
    covered = set().union(*reach.values()) if zero else set()
    uncovered = [t for t in targets if t not in covered]

    witness = None
    if zero and not uncovered:
        remaining = set(targets)
        cover = []
        while remaining:
            best = max(zero, key=lambda p: len(reach[p] & remaining))
            cover.append(best)
            remaining -= reach[best]
        witness = LhvModel.uniform([p for p in zero if p in cover])
    feasible = witness is not None
    return FeasibilityReport(
        game.name, True, feasible, enumerated, len(zero),
        witness=witness,
        certificates=[] if zero else certificates,
        zero_error_profiles=zero,
        uncovered=uncovered,
    )
