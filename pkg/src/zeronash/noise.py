"""Depolarizing noise on the shared state and on every measurement."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .classical import min_error
from .game import BayesianGame, TypeProfile
from .quantum import QuantumStrategy, born_action_distribution, check_shape
from .tensor import Measurement, StateVector, as_matrix

CSV_HEADER = ("eps_s", "eps_m", "quantum_error", "classical_floor", "advantage",
              "closed_form_delta")


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"noise strength {eps!r} outside [0, 1]")
    return eps


@dataclass(frozen=True)
class NoiseParams:
    eps_s: float
    eps_m: float

    def __post_init__(self):
        object.__setattr__(self, "eps_s", _check_eps(self.eps_s))
        object.__setattr__(self, "eps_m", _check_eps(self.eps_m))


def depolarize_state(state, eps: float) -> np.ndarray:
    """(1 - eps) rho + eps I / D, returned as a density matrix."""
    eps = _check_eps(eps)
    rho = state.density() if isinstance(state, StateVector) else as_matrix(state)
    d = rho.shape[0]
    return (1 - eps) * rho + (eps / d) * np.eye(d)


def depolarize_measurement(m: Measurement, eps: float) -> Measurement:
    """Each effect becomes (1 - eps) E + (eps / k) I for k outcomes."""
    eps = _check_eps(eps)
    k = len(m)
    eye = np.eye(m.dim)
    return Measurement(m.dim, tuple((1 - eps) * e + (eps / k) * eye for e in m.effects))


def noisy_strategy(s: QuantumStrategy, n: NoiseParams) -> QuantumStrategy:
    meas = tuple(
        {t: depolarize_measurement(m, n.eps_m) for t, m in ms.items()}
        for ms in s.measurements
    )
    return QuantumStrategy(s.local_dims, depolarize_state(s.shared_state, n.eps_s), meas,
                           s.outcome_maps, s.name)


def noisy_error_probability(g: BayesianGame, s: QuantumStrategy, n: NoiseParams,
                            prior: Mapping[TypeProfile, Fraction] | None = None) -> float:
    check_shape(s, g)
    prior = g.prior if prior is None else prior
    noisy = noisy_strategy(s, n)
    total = 0.0
    for tp in g.type_profiles():
        dist = born_action_distribution(noisy, tp)
        leak = sum(p for ap, p in dist.probabilities.items() if ap not in g.allowed[tp])
        total += float(prior[tp]) * leak
    return total


def closed_form_g5_error(n: NoiseParams) -> float:
    es, em = n.eps_s, n.eps_m
    return 0.5 * (es * (em - 1) ** 2 - (em - 2) * em)


CLOSED_FORMS: dict[str, Callable[[NoiseParams], float]] = {"G5": closed_form_g5_error}


@dataclass(frozen=True)
class SweepRow:
    eps_s: float
    eps_m: float
    quantum_error: float
    classical_floor: float
    advantage: bool
    closed_form_delta: float | None = None


@dataclass
class SweepResult:
    game: str
    shape: tuple[int, int]
    classical_floor: Fraction
    rows: list[SweepRow] = field(default_factory=list)

    def grid(self) -> np.ndarray:
        """quantum_error as an (n_s, n_m) array."""
        return np.array([r.quantum_error for r in self.rows]).reshape(self.shape)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([
                f"{r.eps_s:.12g}", f"{r.eps_m:.12g}", f"{r.quantum_error:.12g}",
                f"{r.classical_floor:.12g}", "true" if r.advantage else "false",
                "" if r.closed_form_delta is None else f"{r.closed_form_delta:.12g}",
            ])
        return buf.getvalue()


def advantage_sweep(g: BayesianGame, s: QuantumStrategy, grid: tuple[int, int] = (21, 21),
                    prior: Mapping[TypeProfile, Fraction] | None = None) -> SweepResult:
    """Evaluate the noisy error on an inclusive uniform grid over [0, 1]^2.

    Rows run over eps_s (outer) then eps_m (inner).
    """
    n_s, n_m = grid
    if n_s < 2 or n_m < 2:
        raise ValueError(f"grid {n_s}x{n_m} needs at least 2 points per axis")
    floor = min_error(g, prior)
    closed = CLOSED_FORMS.get(g.name)
    result = SweepResult(g.name, (n_s, n_m), floor)
    for es in np.linspace(0.0, 1.0, n_s):
        for em in np.linspace(0.0, 1.0, n_m):
            n = NoiseParams(es, em)
            q = noisy_error_probability(g, s, n, prior)
            delta = None if closed is None else abs(q - closed(n))
            result.rows.append(SweepRow(float(es), float(em), q, float(floor),
                                        q < floor, delta))
    return result
