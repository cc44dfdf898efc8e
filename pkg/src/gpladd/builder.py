"""Markov transition-matrix construction from validated scenarios.

Two construction routes share the matrix shape. The distributions route
integrates each step's time-to-success distribution over one time step and
combines it with the step's detection probability, treating success and
detection as independent, which yields fail/stay/advance masses per step.
The evaluations route consumes externally estimated detection probabilities
and assumes the attacker never idles at a step, so each non-terminal row
splits all mass between rollback and advance. Detection at the Ready step
applies per time step of residence there, not on the inbound transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evals import DetectionProfile
from .model import (
    DistributionSpec,
    Family,
    Method,
    ScenarioError,
    ScenarioSpec,
    linearize,
)

__all__ = [
    "DistributionSpec",
    "Family",
    "StepTransitionTriple",
    "TransitionMatrix",
    "raw_success_probability",
    "step_triple",
    "build_chain_distributions",
    "build_chain_evals",
    "validate_matrix",
    "export_dot",
]


def raw_success_probability(dist: DistributionSpec, dt: float) -> float:
    """Probability that a step completes within one time step of length dt.

    Evaluates the distribution's CDF at dt; the fixed family passes its
    probability through unchanged. Non-exponential families are discretized
    memorylessly: each time step is an independent completion attempt.
    """
    if dt <= 0:
        raise ScenarioError("time step must be positive")
    if dist.family is Family.FIXED:
        return float(dist.p)  # type: ignore[arg-type]
    if dist.family is Family.EXPONENTIAL:
        return -math.expm1(-dist.rate * dt)  # type: ignore[operator]
    if dist.family is Family.WEIBULL:
        return -math.expm1(-((dt / dist.scale) ** dist.shape))  # type: ignore[operator]
    raise ScenarioError(f"unknown distribution family {dist.family!r}")  # pragma: no cover


@dataclass(frozen=True)
class StepTransitionTriple:
    """Per-step masses for detection rollback, staying put, and advancing."""

    p_fail: float
    p_stay: float
    p_succ: float


def step_triple(p_det: float, p_raw: float) -> StepTransitionTriple:
    """Combine detection and raw success into (fail, stay, advance) masses.

    Advancing requires completing the step and not being detected; p_stay is
    computed as the exact complement so the three masses sum to 1.0.
    """
    if not 0.0 <= p_det <= 1.0 or not 0.0 <= p_raw <= 1.0:
        raise ScenarioError("step_triple probabilities must lie in [0, 1]")
    p_succ = p_raw * (1.0 - p_det)
    p_stay = 1.0 - (p_det + p_succ)
    return StepTransitionTriple(p_fail=p_det, p_stay=p_stay, p_succ=p_succ)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic transition matrix over the chain's attack steps."""

    labels: tuple[str, ...]
    entries: np.ndarray
    ready_index: int

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ScenarioError("transition matrix must be square")
        if len(self.labels) != arr.shape[0]:
            raise ScenarioError("label count must match matrix size")
        if not 0 <= self.ready_index < arr.shape[0]:
            raise ScenarioError("ready index out of range")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_states(self) -> int:
        return self.entries.shape[0]


def _chain_context(spec: ScenarioSpec):
    order = linearize(spec.graph)
    index = {cid: i for i, cid in enumerate(order)}
    labels = tuple(spec.graph.conditions_by_id[cid].name for cid in order)
    rollback = {
        cid: index[spec.strategy.defender.rollback.get(cid, order[0])] for cid in order
    }
    return order, index, labels, rollback, index[spec.ready_id]


def build_chain_distributions(spec: ScenarioSpec) -> TransitionMatrix:
    """Build the chain from per-step time-to-success distributions.

    Row i places its triple at (rollback(i), i, i+1); masses landing on the
    same column accumulate, which covers the first step rolling back to
    itself. The Ready row has no onward step, so its non-detection mass
    stays in place.
    """
    if spec.method is not Method.DISTRIBUTIONS:
        raise ScenarioError("scenario method must be 'distributions' for this builder")
    order, index, labels, rollback, ready = _chain_context(spec)
    detection = spec.strategy.defender.detection
    n = len(order)
    m = np.zeros((n, n))
    for cid in order:
        i = index[cid]
        p_det = float(detection.get(cid, 0.0))
        if i == ready:
            m[i, rollback[cid]] += p_det
            m[i, i] += 1.0 - p_det
        else:
            dist = (spec.step_distributions or {}).get(cid)
            if dist is None:
                raise ScenarioError(f"step {cid} has no time-to-success distribution")
            triple = step_triple(p_det, raw_success_probability(dist, spec.time_step_hours))
            m[i, rollback[cid]] += triple.p_fail
            m[i, i] += triple.p_stay
            m[i, i + 1] += triple.p_succ
    return TransitionMatrix(labels=labels, entries=m, ready_index=ready)


def build_chain_evals(spec: ScenarioSpec, profile: DetectionProfile) -> TransitionMatrix:
    """Build the chain from a detection profile with zero stay probability.

    Each non-terminal step advances unless detected; the Ready row stays
    unless detected there during residence.
    """
    if spec.method is not Method.EVALUATIONS:
        raise ScenarioError("scenario method must be 'evaluations' for this builder")
    order, index, labels, rollback, ready = _chain_context(spec)
    missing = sorted(cid for cid in order if cid not in profile.probabilities)
    if missing:
        raise ScenarioError(f"detection profile {profile.provenance!r} is missing steps {missing}")
    n = len(order)
    m = np.zeros((n, n))
    for cid in order:
        i = index[cid]
        p = float(profile.probabilities[cid])
        if i == ready:
            m[i, rollback[cid]] += p
            m[i, i] += 1.0 - p
        else:
            m[i, rollback[cid]] += p
            m[i, i + 1] += 1.0 - p
    return TransitionMatrix(labels=labels, entries=m, ready_index=ready)


def validate_matrix(matrix: TransitionMatrix) -> list[str]:
    """Structural diagnostics; an empty list means the matrix is well formed.

    Checks row sums, entry ranges, the chain sparsity pattern (self, next
    step, at most one rollback target per row, no advance out of Ready), and
    that Ready is reachable from the start state. Never raises on bad
    probabilities.
    """
    problems: list[str] = []
    m = matrix.entries
    n = matrix.n_states
    for i in range(n):
        row = m[i]
        row_sum = float(row.sum())
        if not abs(row_sum - 1.0) <= 1e-9:
            problems.append(f"row {i + 1} sums to {row_sum!r}, expected 1")
        in_range = (row >= 0.0) & (row <= 1.0)
        if not bool(in_range.all()):
            problems.append(f"row {i + 1} has entries outside [0, 1]")
        nonzero = [j for j in range(n) if row[j] != 0.0]
        backward = [j for j in nonzero if j < i]
        if len(backward) > 1:
            problems.append(f"row {i + 1} rolls back to multiple states {sorted(j + 1 for j in backward)}")
        if any(j > i + 1 for j in nonzero):
            problems.append(f"row {i + 1} has mass beyond the next step")
        if i == matrix.ready_index and any(j > i for j in nonzero):
            problems.append(f"ready row {i + 1} advances past Ready")
    reachable = {0}
    frontier = [0]
    while frontier:
        src = frontier.pop()
        for dst in range(n):
            if m[src, dst] > 0.0 and dst not in reachable:
                reachable.add(dst)
                frontier.append(dst)
    if matrix.ready_index not in reachable:
        problems.append("Ready state is unreachable from Start")
    return problems


def export_dot(matrix: TransitionMatrix, threshold: float = 0.0) -> str:
    """Render the transition structure as a GraphViz digraph.

    Zero entries are never drawn; positive entries are drawn when at least
    threshold. Output is deterministic byte for byte: nodes in state order,
    edges in row-major order, probabilities rounded to two decimals.
    """
    lines = ["digraph attack {", "  rankdir=LR;"]
    for i, label in enumerate(matrix.labels):
        lines.append(f'  s{i + 1} [label="{label}"];')
    m = matrix.entries
    n = matrix.n_states
    for i in range(n):
        for j in range(n):
            p = float(m[i, j])
            if p > 0.0 and p >= threshold:
                lines.append(f'  s{i + 1} -> s{j + 1} [label="{p:.2f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
