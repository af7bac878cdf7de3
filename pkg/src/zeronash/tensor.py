"""Dense complex linear algebra for small composite systems.

States and effects are plain ``numpy`` arrays.  Global indices are
big-endian over parties: for parties with local dimensions ``(d1, d2, ...)``
the basis label ``(i1, i2, ...)`` sits at ``i1 * d2 * d3 ... + i2 * d3 ... +``.
A party built from several qubits uses the same convention internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

STRUCTURE_TOL = 1e-10
PROB_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DimensionError(ValueError):
    """Operand dimensions do not fit together."""

    def __init__(self, message: str, party: int | None = None):
        super().__init__(message)
        self.party = party


class ProbabilityError(ValueError):
    """A Born-rule value fell outside [0, 1] beyond tolerance."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*rb + k, j*cb + l)`` is ``a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(ops: Sequence) -> np.ndarray:
    return reduce(kron, ops)


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def ket(*bits: int) -> np.ndarray:
    """Computational-basis qubit ket, e.g. ``ket(0, 1)`` is |01>."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(str(b) for b in bits), 2) if bits else 0] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state of a multipartite system."""

    local_dims: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"invalid local dimensions {self.local_dims}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise DimensionError(
                f"{amps.size} amplitudes for local dimensions {dims}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized (squared norm {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, local_dims: Sequence[int], amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(tuple(local_dims), amps / np.linalg.norm(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> np.ndarray:
        return projector(self.amplitudes)


@dataclass(frozen=True)
class Measurement:
    """Ordered list of effects on a ``dim``-dimensional system."""

    dim: int
    effects: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        effects = []
        for k, e in enumerate(self.effects):
            m = as_matrix(e).copy()
            if m.shape != (self.dim, self.dim):
                raise DimensionError(
                    f"effect {k} has shape {m.shape}, expected {(self.dim, self.dim)}"
                )
            m.setflags(write=False)
            effects.append(m)
        if not effects:
            raise ValueError("a measurement needs at least one effect")
        object.__setattr__(self, "effects", tuple(effects))

    @classmethod
    def from_basis(cls, vectors: Sequence) -> "Measurement":
        """Rank-one projective measurement from a list of orthonormal kets."""
        vs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
        return cls(vs[0].size, tuple(projector(v) for v in vs))

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True)
class MeasurementReport:
    hermiticity_defect: float
    negativity: float
    completeness_defect: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.hermiticity_defect, self.negativity,
                   self.completeness_defect) <= self.tol


def validate_measurement(m: Measurement, tol: float = STRUCTURE_TOL) -> MeasurementReport:
    herm = 0.0
    neg = 0.0
    total = np.zeros((m.dim, m.dim), dtype=complex)
    for e in m.effects:
        herm = max(herm, float(np.max(np.abs(e - e.conj().T))))
        h = (e + e.conj().T) / 2
        neg = max(neg, float(-min(0.0, np.linalg.eigvalsh(h).min())))
        total += e
    complete = float(np.max(np.abs(total - np.eye(m.dim))))
    return MeasurementReport(herm, neg, complete, tol)


def _global_dims(state) -> tuple[int, tuple[int, ...] | None]:
    if isinstance(state, StateVector):
        return state.dim, state.local_dims
    rho = as_matrix(state)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    return rho.shape[0], None


def joint_probability(state, effects_per_party: Sequence, tol: float = PROB_TOL) -> float:
    """Born-rule probability of one effect per party on ``state``.

    ``state`` is a :class:`StateVector` or a density matrix.  The value is
    checked to be real and within ``[-tol, 1 + tol]`` before clamping.
    """
    effects = [as_matrix(e) for e in effects_per_party]
    dim, local = _global_dims(state)
    for k, e in enumerate(effects):
        if e.shape[0] != e.shape[1]:
            raise DimensionError(f"effect of party {k} is not square", party=k)
        if local is not None and k < len(local) and e.shape[0] != local[k]:
            raise DimensionError(
                f"effect of party {k} has dimension {e.shape[0]}, "
                f"state expects {local[k]}",
                party=k,
            )
    if local is not None and len(effects) != len(local):
        raise DimensionError(
            f"{len(effects)} effects for a {len(local)}-party state",
            party=min(len(effects), len(local)),
        )
    total = int(np.prod([e.shape[0] for e in effects]))
    if total != dim:
        raise DimensionError(
            f"effects span dimension {total}, state has dimension {dim}",
            party=len(effects) - 1,
        )
    op = kron_all(effects)
    if isinstance(state, StateVector):
        v = state.amplitudes
        val = complex(np.vdot(v, op @ v))
    else:
        val = complex(np.sum(as_matrix(state).T * op))
    if abs(val.imag) > tol or val.real < -tol or val.real > 1 + tol:
        raise ProbabilityError(f"Born value {val!r} outside [0, 1]")
    return min(1.0, max(0.0, val.real))


def outcome_probabilities(state, measurements: Sequence[Measurement],
                          tol: float = PROB_TOL) -> np.ndarray:
    """Born probabilities for every joint outcome at once.

    Entry ``[o1, o2, ...]`` equals ``joint_probability(state, [m1.effects[o1], ...])``;
    the same tolerance check and clamping apply.
    """
    dims = [m.dim for m in measurements]
    dim, local = _global_dims(state)
    if local is not None and tuple(dims) != local:
        party = next((k for k, (a, b) in enumerate(zip(dims, local)) if a != b),
                     min(len(dims), len(local)))
        raise DimensionError(f"measurement dimensions {dims} do not match state {local}",
                             party=party)
    if int(np.prod(dims)) != dim:
        raise DimensionError(f"measurements span dimension {int(np.prod(dims))}, "
                             f"state has dimension {dim}", party=len(dims) - 1)
    rho = state.density() if isinstance(state, StateVector) else as_matrix(state)
    n = len(dims)
    rho_t = rho.reshape(tuple(dims) * 2)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row, col, out = letters[:n], letters[n:2 * n], letters[2 * n:3 * n]
    # Tr[rho (E1 x E2 ...)] = sum rho[row, col] E1[o1, col1, row1] ...
    subs = row + col + "," + ",".join(f"{out[p]}{col[p]}{row[p]}" for p in range(n))
    stacks = [np.stack(m.effects) for m in measurements]
    vals = np.einsum(subs + "->" + out, rho_t, *stacks, optimize=True)
    if (np.max(np.abs(vals.imag)) > tol or vals.real.min() < -tol
            or vals.real.max() > 1 + tol):
        raise ProbabilityError("Born values outside [0, 1]")
    return np.clip(vals.real, 0.0, 1.0)
