"""Occupancy, passage-time, and simulation analytics for attack chains.

Long-run occupancy is the time-average (Cesaro) limit of the state
distribution started from the Start state. It is computed with the averaging
recursion a <- (a + a P) / 2, whose fixed points are exactly the stationary
vectors of P and which converges geometrically even for periodic or
reducible chains; for chains with an absorbing Ready state the limit puts
all mass on Ready, and for irreducible aperiodic chains it is the unique
stationary vector.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .builder import TransitionMatrix

START_INDEX = 0
DEFAULT_HORIZON = 500
QUANTILE_LEVELS = (0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    """Time-average occupancy over states, with convergence bookkeeping."""

    occupancy: np.ndarray
    ready_residence: float
    iterations_used: int
    converged: bool


@dataclass(frozen=True, eq=False)
class FirstPassageSeries:
    """probabilities[t-1] is the chance the first target arrival is at step t.

    Summary statistics are conditional on arriving within the horizon;
    reach_probability reports how much mass the truncated series captured.
    """

    probabilities: np.ndarray
    horizon: int
    reach_probability: float
    mean: float | None
    median: int | None
    quantiles: Mapping[float, int | None]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One sampled path of state indices, including the initial state."""

    seed: int
    states: np.ndarray


def steady_state(
    matrix: TransitionMatrix,
    *,
    tol: float = 1e-10,
    max_iterations: int = 1_000_000,
) -> StationaryDistribution:
    """Time-average occupancy limit from the Start state.

    Iterates the averaging recursion until the vector changes by less than
    tol in max-norm or the iteration cap is reached; the converged flag
    reports which. ready_residence is the occupancy of the Ready state, the
    headline defender metric.
    """
    m = matrix.entries
    a = np.zeros(matrix.n_states)
    a[START_INDEX] = 1.0
    iterations = 0
    converged = False
    while iterations < max_iterations:
        nxt = 0.5 * (a + a @ m)
        iterations += 1
        delta = float(np.max(np.abs(nxt - a)))
        a = nxt
        if delta < tol:
            converged = True
            break
    a.setflags(write=False)
    return StationaryDistribution(
        occupancy=a,
        ready_residence=float(a[matrix.ready_index]),
        iterations_used=iterations,
        converged=converged,
    )


def _series_from(f: np.ndarray, horizon: int) -> FirstPassageSeries:
    cumulative = np.cumsum(f)
    reach = float(cumulative[-1]) if horizon > 0 else 0.0
    if reach <= 0.0:
        mean = None
        quantiles: dict[float, int | None] = {q: None for q in QUANTILE_LEVELS}
        median = None
    else:
        t = np.arange(1, horizon + 1)
        mean = float((t * f).sum() / reach)
        quantiles = {}
        for q in QUANTILE_LEVELS:
            idx = int(np.searchsorted(cumulative, q * reach))
            quantiles[q] = min(idx, horizon - 1) + 1
        median = quantiles[0.5]
    f.setflags(write=False)
    return FirstPassageSeries(
        probabilities=f,
        horizon=horizon,
        reach_probability=reach,
        mean=mean,
        median=median,
        quantiles=quantiles,
    )


def first_passage_distribution(
    matrix: TransitionMatrix, source: int, target: int, horizon: int
) -> FirstPassageSeries:
    """Distribution of the first time the chain hits target from source.

    Computed by making target absorbing and iterating the distribution from
    the source state; f(t) is the newly absorbed mass at step t. When source
    equals target the passage is immediate by convention (all mass at t=0),
    so the returned series over t >= 1 is empty and reach_probability is 1.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    n = matrix.n_states
    if not (0 <= source < n and 0 <= target < n):
        raise ValueError("source and target must be state indices")
    f = np.zeros(horizon)
    if source == target:
        f.setflags(write=False)
        return FirstPassageSeries(
            probabilities=f,
            horizon=horizon,
            reach_probability=1.0,
            mean=0.0,
            median=0,
            quantiles={q: 0 for q in QUANTILE_LEVELS},
        )
    absorbed = matrix.entries.copy()
    absorbed[target, :] = 0.0
    absorbed[target, target] = 1.0
    v = np.zeros(n)
    v[source] = 1.0
    prev = 0.0
    for t in range(1, horizon + 1):
        v = v @ absorbed
        cur = float(v[target])
        f[t - 1] = cur - prev
        prev = cur
    return _series_from(f, horizon)


def unimpeded_success_probability(matrix: TransitionMatrix) -> float:
    """Probability of reaching Ready in the minimum number of steps.

    For a single chain this is the product of the forward transition
    probabilities from Start through the step before Ready, i.e. the chance
    of completing the attack without a single detection-driven rollback.
    """
    p = 1.0
    for i in range(START_INDEX, matrix.ready_index):
        p *= float(matrix.entries[i, i + 1])
    return p


def conditional_state_distribution(
    matrix: TransitionMatrix, known_state: int, elapsed: int
) -> np.ndarray:
    """State distribution `elapsed` steps after the chain was seen at a state.

    Useful for estimating attacker progress between a logged action and the
    moment the defender acts on it.
    """
    if elapsed < 0:
        raise ValueError("elapsed must be non-negative")
    if not 0 <= known_state < matrix.n_states:
        raise ValueError("known_state must be a state index")
    v = np.zeros(matrix.n_states)
    v[known_state] = 1.0
    for _ in range(elapsed):
        v = v @ matrix.entries
    v.setflags(write=False)
    return v


def _cumulative_rows(matrix: TransitionMatrix) -> list[tuple[list[float], int]]:
    rows: list[tuple[list[float], int]] = []
    for i in range(matrix.n_states):
        row = matrix.entries[i]
        positive = np.flatnonzero(row > 0.0)
        # An all-zero row cannot occur from the builders; treat it as absorbing.
        last = int(positive[-1]) if positive.size else i
        rows.append((np.cumsum(row).tolist(), last))
    return rows


def _draw_next(cumulative: list[float], last: int, u: float) -> int:
    j = bisect_right(cumulative, u)
    # Cumulative sums can fall a few ulps short of 1; clamp to the final
    # positive-probability state so the step is always a legal transition.
    return last if j >= len(cumulative) else j


def simulate(matrix: TransitionMatrix, n_steps: int, seed: int) -> Trajectory:
    """Sample a trajectory of n_steps transitions from the Start state.

    Each transition inverts the current row's CDF over states in ascending
    index order, so a (matrix, seed) pair always yields the same path.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    rows = _cumulative_rows(matrix)
    rng = np.random.default_rng(seed)
    states = np.empty(n_steps + 1, dtype=np.int64)
    cur = START_INDEX
    states[0] = cur
    filled = 1
    while filled <= n_steps:
        chunk = rng.random(min(65536, n_steps - filled + 1)).tolist()
        for u in chunk:
            cumulative, last = rows[cur]
            cur = _draw_next(cumulative, last, u)
            states[filled] = cur
            filled += 1
    states.setflags(write=False)
    return Trajectory(seed=seed, states=states)


def empirical_first_passage(
    matrix: TransitionMatrix, trials: int, horizon: int, seed: int
) -> FirstPassageSeries:
    """Monte Carlo estimate of the Start-to-Ready first-passage distribution.

    Trial k draws from a generator seeded with (seed, k), so each trial's
    path is independent of execution order and the histogram is reproducible
    for any trial count or worker layout.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    target = matrix.ready_index
    if START_INDEX == target:
        f = np.zeros(horizon)
        f.setflags(write=False)
        return FirstPassageSeries(
            probabilities=f,
            horizon=horizon,
            reach_probability=1.0,
            mean=0.0,
            median=0,
            quantiles={q: 0 for q in QUANTILE_LEVELS},
        )
    rows = _cumulative_rows(matrix)
    counts = np.zeros(horizon)
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        cur = START_INDEX
        t = 0
        chunk: list[float] = []
        pos = 0
        while t < horizon:
            if pos == len(chunk):
                chunk = rng.random(64).tolist()
                pos = 0
            u = chunk[pos]
            pos += 1
            cumulative, last = rows[cur]
            cur = _draw_next(cumulative, last, u)
            t += 1
            if cur == target:
                counts[t - 1] += 1.0
                break
    return _series_from(counts / trials, horizon)


def occupancy_fractions(trajectory: Trajectory, n_states: int) -> np.ndarray:
    """Fraction of time the trajectory spent in each state."""
    counts = np.bincount(trajectory.states, minlength=n_states).astype(float)
    counts /= counts.sum()
    counts.setflags(write=False)
    return counts
