from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

TypeProfile = tuple[str, ...]
ActionProfile = tuple[str, ...]

MAX_PLAYERS = 3
MAX_ACTIONS = 8


class GameError(ValueError):
    """Invalid game data."""


def uniform_prior(type_spaces: Sequence[Sequence[str]]) -> dict[TypeProfile, Fraction]:
    profiles = list(itertools.product(*type_spaces))
    p = Fraction(1, len(profiles))
    return {tp: p for tp in profiles}


@dataclass(frozen=True, eq=True)
class BayesianGame:
    """Finite Bayesian game with one allowed (equilibrium) set per type profile.

    Payoffs are implicit: every player gets 1 on an allowed joint action and
    0 elsewhere.  Label order is declaration order and drives every
    enumeration in the package.
    """

    name: str
    players: tuple[str, ...]
    type_spaces: tuple[tuple[str, ...], ...]
    action_spaces: tuple[tuple[str, ...], ...]
    allowed: Mapping[TypeProfile, frozenset[ActionProfile]]
    prior: Mapping[TypeProfile, Fraction] = field(default=None)

    __hash__ = None

    def __post_init__(self):
        players = tuple(self.players)
        types = tuple(tuple(t) for t in self.type_spaces)
        actions = tuple(tuple(a) for a in self.action_spaces)
        n = len(players)
        if not 1 <= n <= MAX_PLAYERS:
            raise GameError(f"{n} players; between 1 and {MAX_PLAYERS} supported")
        if len(set(players)) != n:
            raise GameError(f"duplicate player labels in {players}")
        if len(types) != n or len(actions) != n:
            raise GameError("need one type space and one action space per player")
        for label, ts, acts in zip(players, types, actions):
            if not ts or len(set(ts)) != len(ts):
                raise GameError(f"player {label}: type labels must be nonempty and distinct")
            if not acts or len(set(acts)) != len(acts):
                raise GameError(f"player {label}: action labels must be nonempty and distinct")
            if len(acts) > MAX_ACTIONS:
                raise GameError(f"player {label}: more than {MAX_ACTIONS} actions")
        profiles = list(itertools.product(*types))

        allowed = {}
        for tp, acts in dict(self.allowed).items():
            tp = tuple(tp)
            if tp not in set(profiles):
                raise GameError(f"allowed set for unknown type profile {tp}")
            ok = set()
            for ap in acts:
                ap = tuple(ap)
                if len(ap) != n or any(a not in actions[i] for i, a in enumerate(ap)):
                    raise GameError(f"type profile {tp}: undeclared joint action {ap}")
                ok.add(ap)
            allowed[tp] = frozenset(ok)
        missing = [tp for tp in profiles if tp not in allowed]
        if missing:
            raise GameError(f"missing type profile {' '.join(missing[0])}")

        if self.prior is None:
            prior = uniform_prior(types)
        else:
            prior = {tuple(tp): Fraction(p) for tp, p in dict(self.prior).items()}
            for tp in profiles:
                prior.setdefault(tp, Fraction(0))
            if set(prior) != set(profiles):
                raise GameError("prior mentions an unknown type profile")
            if any(p < 0 for p in prior.values()):
                raise GameError("prior has a negative entry")
            if sum(prior.values()) != 1:
                raise GameError(f"prior sums to {sum(prior.values())}, not 1")

        object.__setattr__(self, "players", players)
        object.__setattr__(self, "type_spaces", types)
        object.__setattr__(self, "action_spaces", actions)
        object.__setattr__(self, "allowed", {tp: allowed[tp] for tp in profiles})
        object.__setattr__(self, "prior", {tp: prior[tp] for tp in profiles})

    @property
    def n_players(self) -> int:
        return len(self.players)

    def type_profiles(self) -> Iterator[TypeProfile]:
        return itertools.product(*self.type_spaces)

    def action_profiles(self) -> Iterator[ActionProfile]:
        return itertools.product(*self.action_spaces)

    def has_uniform_prior(self) -> bool:
        return self.prior == uniform_prior(self.type_spaces)

    def with_prior(self, prior: Mapping[TypeProfile, Fraction]) -> "BayesianGame":
        return BayesianGame(self.name, self.players, self.type_spaces,
                            self.action_spaces, self.allowed, prior)

    def with_allowed(self, tp: TypeProfile, acts) -> "BayesianGame":
        allowed = dict(self.allowed)
        allowed[tuple(tp)] = frozenset(tuple(a) for a in acts)
        return BayesianGame(self.name, self.players, self.type_spaces,
                            self.action_spaces, allowed, self.prior)

    def stage_game(self, tp: TypeProfile) -> "StageGame":
        """Indicator stage game: payoff 1 to everyone on allowed profiles."""
        ok = self.allowed[tuple(tp)]
        payoff = {
            ap: tuple(1.0 if ap in ok else 0.0 for _ in self.players)
            for ap in self.action_profiles()
        }
        return StageGame(self.action_spaces, payoff)


@dataclass(frozen=True)
class StageGame:
    action_spaces: tuple[tuple[str, ...], ...]
    payoff: Mapping[ActionProfile, tuple[float, ...]]

    def __post_init__(self):
        spaces = tuple(tuple(a) for a in self.action_spaces)
        object.__setattr__(self, "action_spaces", spaces)
        for ap in itertools.product(*spaces):
            if ap not in self.payoff:
                raise GameError(f"no payoff for joint action {ap}")
            if len(self.payoff[ap]) != len(spaces):
                raise GameError(f"payoff for {ap} must have one entry per player")


def compute_pure_nash(g: StageGame, strict: bool = False) -> set[ActionProfile]:
    """Pure-strategy Nash equilibria of a stage game.

    A profile qualifies when no single player can raise their own payoff by
    switching action.  With ``strict=True`` every switch must lower it.
    """
    out = set()
    for ap in itertools.product(*g.action_spaces):
        stable = True
        for i, acts in enumerate(g.action_spaces):
            here = g.payoff[ap][i]
            for alt in acts:
                if alt == ap[i]:
                    continue
                there = g.payoff[ap[:i] + (alt,) + ap[i + 1:]][i]
                if there > here or (strict and there >= here):
                    stable = False
                    break
            if not stable:
                break
        if stable:
            out.add(ap)
    return out
