"""Parameter scans over the Hardy-state family on G7."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .game import BayesianGame, registry_get
from .quantum import (
    HardyMode,
    HardyParams,
    build_hardy_strategy,
    hardy_state,
    schmidt_coefficients,
    verify_strong_zero_error,
)

SCAN_TOL_ZERO = 1e-9
SCAN_MIN_PROB = 1e-3
WITNESS = (("x1", "y1"), ("1", "1"))

CSV_HEADER = ("gamma", "delta", "witness_probability", "schmidt_min", "max_leak",
              "min_allowed_probability", "verdict")


@dataclass(frozen=True)
class ScanPoint:
    gamma: float
    delta: float
    witness: float
    schmidt_min: float
    max_leak: float
    min_allowed: float
    passed: bool


def evaluate_point(params: HardyParams, game: BayesianGame | None = None,
                   tol_zero: float = SCAN_TOL_ZERO, min_prob: float = SCAN_MIN_PROB) -> ScanPoint:
    game = game or registry_get("G7")
    report = verify_strong_zero_error(build_hardy_strategy(params), game, tol_zero, min_prob)
    tp, ap = WITNESS
    return ScanPoint(
        params.gamma, params.delta,
        report.distributions[tp][ap],
        schmidt_coefficients(hardy_state(params))[1],
        report.max_leak, report.min_allowed, report.passed,
    )


def interior_grid(steps: int) -> np.ndarray:
    """``steps`` evenly spaced angles strictly inside (0, pi)."""
    if steps < 1:
        raise ValueError("need at least one grid step")
    return np.pi * np.arange(1, steps + 1) / (steps + 1)


def hardy_scan(gamma_steps: int, delta_steps: int, eta: float = 0.0, kappa: float = 0.0,
               mode: HardyMode | str = HardyMode.SOLVED, tol_zero: float = SCAN_TOL_ZERO,
               min_prob: float = SCAN_MIN_PROB) -> list[ScanPoint]:
    game = registry_get("G7")
    return [
        evaluate_point(HardyParams(float(g), float(d), eta, kappa, mode), game, tol_zero, min_prob)
        for g in interior_grid(gamma_steps)
        for d in interior_grid(delta_steps)
    ]


def best_point(points: list[ScanPoint]) -> ScanPoint:
    return max(points, key=lambda p: p.witness)


def closest_to_maximal(points: list[ScanPoint]) -> ScanPoint:
    target = 1 / np.sqrt(2)
    return min(points, key=lambda p: abs(p.schmidt_min - target))


def refine_maximum(start: ScanPoint, width: float, rounds: int = 12, steps: int = 7,
                   eta: float = 0.0, kappa: float = 0.0,
                   mode: HardyMode | str = HardyMode.SOLVED) -> ScanPoint:
    """Zoom a ``steps`` x ``steps`` grid around the current best witness."""
    game = registry_get("G7")
    best = start
    eps = 1e-9
    for _ in range(rounds):
        gs = np.clip(np.linspace(best.gamma - width, best.gamma + width, steps), eps, np.pi - eps)
        ds = np.clip(np.linspace(best.delta - width, best.delta + width, steps), eps, np.pi - eps)
        for g in gs:
            for d in ds:
                p = evaluate_point(HardyParams(float(g), float(d), eta, kappa, mode), game)
                if p.witness > best.witness:
                    best = p
        width /= 2
    return best


def scan_to_csv(points: list[ScanPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([f"{p.gamma:.12g}", f"{p.delta:.12g}", f"{p.witness:.12g}",
                    f"{p.schmidt_min:.12g}", f"{p.max_leak:.12g}", f"{p.min_allowed:.12g}",
                    "pass" if p.passed else "fail"])
    return buf.getvalue()
