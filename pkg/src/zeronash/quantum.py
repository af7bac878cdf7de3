"""Entanglement-assisted strategies and their Born-rule evaluation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .game import ActionProfile, BayesianGame, TypeProfile
from .tensor import (
    I2,
    DimensionError,
    Measurement,
    StateVector,
    X,
    Y,
    Z,
    as_matrix,
    outcome_probabilities,
    kron,
    ket,
    validate_measurement,
)

ZERO_TOL = 1e-12
DEGENERATE_TOL = 1e-9


class StrategyError(ValueError):
    """Strategy does not fit the game it is evaluated on."""


@dataclass(frozen=True)
class QuantumStrategy:
    local_dims: tuple[int, ...]
    shared_state: StateVector | np.ndarray = field(repr=False)
    # measurements[i][type] and outcome_maps[i][type][k] -> action label
    measurements: tuple[Mapping[str, Measurement], ...] = field(repr=False)
    outcome_maps: tuple[Mapping[str, tuple[str, ...]], ...]
    name: str = "custom"

    def __post_init__(self):
        dims = tuple(self.local_dims)
        object.__setattr__(self, "local_dims", dims)
        if len(self.measurements) != len(dims) or len(self.outcome_maps) != len(dims):
            raise StrategyError("need measurements and outcome maps for every player")
        glob = int(np.prod(dims))
        if isinstance(self.shared_state, StateVector):
            if self.shared_state.dim != glob:
                raise DimensionError(
                    f"state dimension {self.shared_state.dim} != product of {dims}")
        else:
            rho = as_matrix(self.shared_state)
            if rho.shape != (glob, glob):
                raise DimensionError(f"density matrix shape {rho.shape} != {(glob, glob)}")
        for i, (ms, maps) in enumerate(zip(self.measurements, self.outcome_maps)):
            if set(ms) != set(maps):
                raise StrategyError(f"player {i}: measurement and outcome-map types differ")
            for t, m in ms.items():
                if m.dim != dims[i]:
                    raise DimensionError(
                        f"player {i} type {t}: measurement on dimension {m.dim}, "
                        f"local dimension is {dims[i]}", party=i)
                if len(maps[t]) != len(m):
                    raise StrategyError(
                        f"player {i} type {t}: {len(m)} outcomes but "
                        f"{len(maps[t])} mapped actions")

    def with_state(self, state) -> "QuantumStrategy":
        return QuantumStrategy(self.local_dims, state, self.measurements,
                               self.outcome_maps, self.name)

    def with_measurements(self, measurements) -> "QuantumStrategy":
        return QuantumStrategy(self.local_dims, self.shared_state, measurements,
                               self.outcome_maps, self.name)


@dataclass(frozen=True)
class ActionDistribution:
    type_profile: TypeProfile
    probabilities: Mapping[ActionProfile, float]

    def __getitem__(self, ap: ActionProfile) -> float:
        return self.probabilities.get(tuple(ap), 0.0)

    def total(self) -> float:
        return float(sum(self.probabilities.values()))


def check_shape(s: QuantumStrategy, g: BayesianGame) -> None:
    if len(s.local_dims) != g.n_players:
        raise StrategyError(
            f"strategy has {len(s.local_dims)} players, game {g.name} has {g.n_players}")
    for i, (ts, acts) in enumerate(zip(g.type_spaces, g.action_spaces)):
        if set(s.measurements[i]) != set(ts):
            raise StrategyError(
                f"player {g.players[i]}: strategy types {sorted(s.measurements[i])} "
                f"do not match game types {list(ts)}")
        for t in ts:
            bad = [a for a in s.outcome_maps[i][t] if a not in acts]
            if bad:
                raise StrategyError(
                    f"player {g.players[i]} type {t}: outcome map uses unknown actions {bad}")


def born_action_distribution(s: QuantumStrategy, tp: TypeProfile) -> ActionDistribution:
    tp = tuple(tp)
    if len(tp) != len(s.local_dims):
        raise StrategyError(f"type profile {tp} has the wrong length")
    try:
        meas = [s.measurements[i][t] for i, t in enumerate(tp)]
        maps = [s.outcome_maps[i][t] for i, t in enumerate(tp)]
    except KeyError as exc:
        raise StrategyError(f"unknown type {exc.args[0]!r} in profile {tp}") from None
    table = outcome_probabilities(s.shared_state, meas)
    probs: dict[ActionProfile, float] = {}
    for outcome in itertools.product(*(range(len(m)) for m in meas)):
        ap = tuple(mp[k] for mp, k in zip(maps, outcome))
        probs[ap] = probs.get(ap, 0.0) + float(table[outcome])
    return ActionDistribution(tp, probs)


@dataclass
class VerificationReport:
    game: str
    strategy: str
    strong: bool
    passed: bool
    tol: float
    leaks: dict[TypeProfile, float]
    max_leak: float
    distributions: dict[TypeProfile, ActionDistribution] = field(repr=False)
    min_allowed: float | None = None
    min_allowed_at: tuple[TypeProfile, ActionProfile] | None = None
    positivity_threshold: float | None = None

    def to_dict(self) -> dict:
        out = {
            "game": self.game,
            "strategy": self.strategy,
            "check": "strong" if self.strong else "zero-error",
            "verdict": "pass" if self.passed else "fail",
            "tol": self.tol,
            "max_leak": self.max_leak,
            "leaks": [{"type_profile": list(tp), "leak": v} for tp, v in self.leaks.items()],
        }
        if self.strong:
            out["positivity_threshold"] = self.positivity_threshold
            out["min_allowed_probability"] = self.min_allowed
            out["min_allowed_at"] = None if self.min_allowed_at is None else {
                "type_profile": list(self.min_allowed_at[0]),
                "action": list(self.min_allowed_at[1]),
            }
        return out


def _distributions(s: QuantumStrategy, g: BayesianGame) -> dict[TypeProfile, ActionDistribution]:
    check_shape(s, g)
    return {tp: born_action_distribution(s, tp) for tp in g.type_profiles()}


def _leaks(g: BayesianGame, dists) -> dict[TypeProfile, float]:
    return {
        tp: float(sum(p for ap, p in d.probabilities.items() if ap not in g.allowed[tp]))
        for tp, d in dists.items()
    }


def verify_zero_error(s: QuantumStrategy, g: BayesianGame, tol: float = ZERO_TOL) -> VerificationReport:
    dists = _distributions(s, g)
    leaks = _leaks(g, dists)
    worst = max(leaks.values())
    return VerificationReport(g.name, s.name, False, worst <= tol, tol, leaks, worst, dists)


def verify_strong_zero_error(s: QuantumStrategy, g: BayesianGame, tol_zero: float = ZERO_TOL,
                             min_prob: float | None = None) -> VerificationReport:
    """Leak at most ``tol_zero``; every allowed outcome at least ``min_prob``.

    ``min_prob`` defaults to ``10 * tol_zero``.
    """
    threshold = 10 * tol_zero if min_prob is None else min_prob
    dists = _distributions(s, g)
    leaks = _leaks(g, dists)
    worst = max(leaks.values())
    index = [{a: k for k, a in enumerate(acts)} for acts in g.action_spaces]
    lowest, where = None, None
    for tp in g.type_profiles():
        for ap in sorted(g.allowed[tp], key=lambda ap: [index[i][a] for i, a in enumerate(ap)]):
            p = dists[tp][ap]
            if lowest is None or p < lowest:
                lowest, where = p, (tp, ap)
    passed = worst <= tol_zero and lowest is not None and lowest >= threshold
    return VerificationReport(g.name, s.name, True, passed, tol_zero, leaks, worst, dists,
                              lowest, where, threshold)


# --- magic square ---------------------------------------------------------

def _four_outcome(m: np.ndarray, mp: np.ndarray) -> Measurement:
    eye = np.eye(4)
    mm = m @ mp
    return Measurement(4, (
        (eye + m + mp + mm) / 4,
        (eye + m - mp - mm) / 4,
        (eye - m + mp - mm) / 4,
        (eye - m - mp + mm) / 4,
    ))


MAGIC_ALICE = {
    "x1": (kron(Z, I2), kron(I2, Z)),
    "x2": (kron(I2, X), kron(X, I2)),
    "x3": (kron(Z, X), kron(X, Z)),
}
MAGIC_BOB = {
    "y1": (kron(Z, I2), kron(I2, X)),
    "y2": (kron(I2, Z), kron(X, I2)),
    "y3": (kron(Z, Z), kron(X, X)),
}


def two_ebit_state() -> StateVector:
    """|phi+>_{A1B1} |phi+>_{A2B2} with Alice holding (A1, A2), Bob (B1, B2)."""
    amps = np.zeros(16, dtype=complex)
    for q1, q2 in itertools.product((0, 1), repeat=2):
        local = 2 * q1 + q2
        amps[4 * local + local] = 0.5
    return StateVector((4, 4), amps)


def build_magic_square_strategy() -> QuantumStrategy:
    labels = ("1", "2", "3", "4")
    alice = {t: _four_outcome(*ops) for t, ops in MAGIC_ALICE.items()}
    bob = {t: _four_outcome(*ops) for t, ops in MAGIC_BOB.items()}
    return QuantumStrategy(
        (4, 4), two_ebit_state(), (alice, bob),
        ({t: labels for t in alice}, {t: labels for t in bob}),
        name="magic-square",
    )


# --- GHZ ------------------------------------------------------------------

def ghz_state() -> StateVector:
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = 1 / np.sqrt(2)
    return StateVector((2, 2, 2), amps)


def pauli_measurement(p: np.ndarray) -> Measurement:
    """Two-outcome measurement, outcome 0 is the +1 eigenspace."""
    return Measurement(2, ((I2 + p) / 2, (I2 - p) / 2))


def build_ghz_strategy() -> QuantumStrategy:
    types = (("x1", "x2"), ("y1", "y2"), ("z1", "z2"))
    meas = tuple({t1: pauli_measurement(X), t2: pauli_measurement(Y)} for t1, t2 in types)
    maps = tuple({t: ("1", "2") for t in ts} for ts in types)
    return QuantumStrategy((2, 2, 2), ghz_state(), meas, maps, name="ghz")


# --- Hardy ----------------------------------------------------------------

class HardyMode(str, Enum):
    SOLVED = "solved"
    LITERAL_X = "literal-x"


@dataclass(frozen=True)
class HardyParams:
    gamma: float
    delta: float
    eta: float = 0.0
    kappa: float = 0.0
    mode: HardyMode = HardyMode.SOLVED

    def __post_init__(self):
        object.__setattr__(self, "mode", HardyMode(self.mode))
        for name in ("gamma", "delta"):
            v = getattr(self, name)
            if not 0.0 < v < np.pi:
                raise ValueError(
                    f"{name}={v!r} must lie strictly inside (0, pi); "
                    "endpoints give a product state")
        for name in ("eta", "kappa"):
            v = getattr(self, name)
            if not 0.0 <= v < 2 * np.pi:
                raise ValueError(f"{name}={v!r} must lie in [0, 2pi)")


def hardy_basis(angle: float, phase: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    e = np.exp(1j * phase)
    return np.array([c, e * s], dtype=complex), np.array([s, -e * c], dtype=complex)


def hardy_state(p: HardyParams) -> StateVector:
    a0, a1 = hardy_basis(p.gamma, p.eta)
    b0, b1 = hardy_basis(p.delta, p.kappa)
    tg, td = np.tan(p.gamma / 2), np.tan(p.delta / 2)
    amps = tg * np.kron(a0, b1) + td * np.kron(a1, b0) + np.kron(a1, b1)
    # the squared norm is 1 + tg^2 + td^2 for orthonormal local bases
    return StateVector.normalized((2, 2), amps)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    k = int(np.flatnonzero(np.abs(v) > 1e-12)[0])
    return v * (abs(v[k]) / v[k])


def _orthogonal_basis(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(u, u_perp) with <u|w> = 0."""
    u = _phase_fix(np.array([-np.conj(w[1]), np.conj(w[0])]))
    u_perp = _phase_fix(np.array([-np.conj(u[1]), np.conj(u[0])]))
    return u, u_perp


def schmidt_coefficients(state: StateVector) -> tuple[float, float]:
    if len(state.local_dims) != 2:
        raise ValueError("Schmidt coefficients need exactly two parties")
    m = state.amplitudes.reshape(state.local_dims)
    sv = np.linalg.svd(m, compute_uv=False)
    sv = np.sort(sv)[::-1]
    if len(sv) == 1:
        return (float(sv[0]), 0.0)
    return (float(sv[0]), float(sv[1]))


def solve_hardy_type1_bases(state: StateVector, a_basis: Sequence[np.ndarray],
                            b_basis: Sequence[np.ndarray]):
    """Type-1 bases realizing the two conditional zeros.

    Alice's action-1 vector is orthogonal to her conditional state given
    Bob's ``b_basis[1]``; Bob's is orthogonal to his given Alice's
    ``a_basis[1]``.  Returns ``(alice_pair, bob_pair)``, action-1 first.
    """
    if state.local_dims != (2, 2):
        raise ValueError("expected a two-qubit state")
    if schmidt_coefficients(state)[1] <= DEGENERATE_TOL:
        raise ValueError("state is (numerically) a product state")
    m = state.amplitudes.reshape(2, 2)
    alice_cond = m @ np.conj(np.asarray(b_basis[1]))
    bob_cond = np.conj(np.asarray(a_basis[1])) @ m
    for who, cond in (("Alice", alice_cond), ("Bob", bob_cond)):
        if np.linalg.norm(cond) < DEGENERATE_TOL:
            raise ValueError(f"degenerate conditional state for {who}")
    return _orthogonal_basis(alice_cond), _orthogonal_basis(bob_cond)


def build_hardy_strategy(p: HardyParams) -> QuantumStrategy:
    a0, a1 = hardy_basis(p.gamma, p.eta)
    b0, b1 = hardy_basis(p.delta, p.kappa)
    state = hardy_state(p)
    if p.mode is HardyMode.LITERAL_X:
        plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
        minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
        alice1 = bob1 = (plus, minus)
    else:
        alice1, bob1 = solve_hardy_type1_bases(state, (a0, a1), (b0, b1))
    alice = {"x1": Measurement.from_basis(alice1), "x2": Measurement.from_basis((a0, a1))}
    bob = {"y1": Measurement.from_basis(bob1), "y2": Measurement.from_basis((b0, b1))}
    maps = ({"x1": ("1", "2"), "x2": ("1", "2")}, {"y1": ("1", "2"), "y2": ("1", "2")})
    return QuantumStrategy((2, 2), state, (alice, bob), maps, name=f"hardy-{p.mode.value}")


def maximally_entangled_hardy_strategy() -> QuantumStrategy:
    """Solved-mode construction applied to |phi+>.

    Bob's type-2 basis is (|1>, |0>) so that the |a0 b0> amplitude vanishes,
    as it does throughout the Hardy family.
    """
    state = StateVector((2, 2), (ket(0, 0) + ket(1, 1)) / np.sqrt(2))
    a_basis, b_basis = (ket(0), ket(1)), (ket(1), ket(0))
    alice1, bob1 = solve_hardy_type1_bases(state, a_basis, b_basis)
    alice = {"x1": Measurement.from_basis(alice1), "x2": Measurement.from_basis(a_basis)}
    bob = {"y1": Measurement.from_basis(bob1), "y2": Measurement.from_basis(b_basis)}
    maps = ({"x1": ("1", "2"), "x2": ("1", "2")}, {"y1": ("1", "2"), "y2": ("1", "2")})
    return QuantumStrategy((2, 2), state, (alice, bob), maps, name="hardy-phi-plus")


STRATEGIES = ("magic-square", "ghz", "hardy")
DEFAULT_STRATEGY = {"G5": "magic-square", "G6": "ghz", "G7": "hardy", "G7_appendix": "hardy"}


def build_strategy(name: str, hardy: HardyParams | None = None) -> QuantumStrategy:
    if name == "magic-square":
        return build_magic_square_strategy()
    if name == "ghz":
        return build_ghz_strategy()
    if name == "hardy":
        return build_hardy_strategy(hardy or HardyParams(np.pi / 3, np.pi / 3))
    raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")


def strategy_measurement_reports(s: QuantumStrategy):
    return {
        (i, t): validate_measurement(m)
        for i, ms in enumerate(s.measurements)
        for t, m in ms.items()
    }
