"""Independent reference computations used to check the library.

These deliberately avoid the library's code paths: occupancy comes from a
renewal argument over return times to the start state, passage probabilities
from explicit products and dense matrix powers, distribution values from
quadrature over the density, and allocations from exhaustive enumeration.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np


def renewal_ready_residence(dets: Sequence[float]) -> float:
    """Long-run fraction of time at the final (Ready) step.

    Valid for a single chain with zero stay probability where every
    detection rolls the attacker back to the start. Cycles are returns to
    the start state; the expected return time follows the backward
    recursion T_i = 1 + (1 - p_i) T_{i+1} with T_ready = 1 / p_ready, and
    the expected Ready time per cycle is the clean-run probability divided
    by the Ready detection probability.
    """
    dets = [float(p) for p in dets]
    clean_run = math.prod(1.0 - p for p in dets[:-1])
    p_ready = dets[-1]
    if p_ready == 0.0:
        return 1.0 if clean_run > 0.0 else 0.0
    t_next = 1.0 / p_ready
    for i in range(len(dets) - 2, 0, -1):
        t_next = 1.0 + (1.0 - dets[i]) * t_next
    expected_cycle = 1.0 + (1.0 - dets[0]) * t_next
    return (clean_run / p_ready) / expected_cycle


def forward_product(dets: Sequence[float]) -> float:
    """Probability of a straight run to Ready with no rollback."""
    return math.prod(1.0 - float(p) for p in dets[:-1])


def power_iteration(matrix: np.ndarray, start: int = 0, tol: float = 1e-13, cap: int = 1_000_000) -> np.ndarray:
    """Plain power iteration of the distribution; assumes an aperiodic chain."""
    v = np.zeros(matrix.shape[0])
    v[start] = 1.0
    for _ in range(cap):
        nxt = v @ matrix
        if np.max(np.abs(nxt - v)) < tol:
            return nxt
        v = nxt
    return v


def matrix_power_distribution(matrix: np.ndarray, start: int, steps: int) -> np.ndarray:
    """Row of the dense matrix power; cross-checks iterated vector products."""
    return np.linalg.matrix_power(matrix, steps)[start]


def first_passage_by_absorption(matrix: np.ndarray, source: int, target: int, horizon: int) -> np.ndarray:
    """First-passage mass per step via dense powers of the absorbed matrix."""
    absorbed = matrix.copy()
    absorbed[target, :] = 0.0
    absorbed[target, target] = 1.0
    out = np.zeros(horizon)
    prev = 0.0
    power = np.eye(matrix.shape[0])
    for t in range(1, horizon + 1):
        power = power @ absorbed
        cur = power[source, target]
        out[t - 1] = cur - prev
        prev = cur
    return out


def cdf_by_quadrature(pdf, upper: float, n: int = 200_001) -> float:
    """Trapezoid integration of a density from zero to upper."""
    grid = np.linspace(0.0, upper, n)
    return float(np.trapezoid(pdf(grid), grid))


def exponential_pdf(rate: float):
    return lambda t: rate * np.exp(-rate * t)


def weibull_pdf(shape: float, scale: float):
    def pdf(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        positive = t > 0
        x = t[positive] / scale
        out[positive] = (shape / scale) * x ** (shape - 1.0) * np.exp(-(x**shape))
        return out

    return pdf


def exhaustive_best_value(score_for_units, steps: Sequence[int], budget: int) -> float:
    """Minimum score over every way to spend the whole budget on steps."""
    best = math.inf
    for combo in itertools.combinations_with_replacement(sorted(steps), budget):
        units = {s: 0 for s in steps}
        for s in combo:
            units[s] += 1
        best = min(best, score_for_units(units))
    return best


def ks_distance(f_a: np.ndarray, f_b: np.ndarray) -> float:
    """Max gap between the cumulative sums of two per-step mass series."""
    return float(np.max(np.abs(np.cumsum(f_a) - np.cumsum(f_b))))
