"""Detection-investment analysis over rebuilt evaluation chains.

Quantifies how raising detection at individual steps moves the defender
metrics (Ready residence, unimpeded success, passage times) and allocates a
whole-number detection budget across steps with a greedy rule that is
checked against exhaustive enumeration at small budgets by the test suite.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .analysis import (
    DEFAULT_HORIZON,
    START_INDEX,
    first_passage_distribution,
    steady_state,
    unimpeded_success_probability,
)
from .builder import build_chain_evals
from .evals import DetectionProfile
from .model import Method, ScenarioError, ScenarioSpec


class Objective(str, enum.Enum):
    MIN_READY_RESIDENCE = "min-ready-residence"
    MIN_UNIMPEDED_SUCCESS = "min-unimpeded-success"
    MAX_MEAN_FIRST_PASSAGE = "max-mean-first-passage"


@dataclass(frozen=True)
class InvestmentModel:
    """Linear investment: k units add k * increment to a step's detection
    probability, clamped at 1. Isolated here so a different mapping from
    spend to probability can replace it without touching the allocator."""

    increment: float
    kind: str = "additive-clamped"

    def __post_init__(self) -> None:
        if self.kind != "additive-clamped":
            raise ValueError("only additive-clamped investment is supported")
        if not 0.0 < self.increment <= 1.0:
            raise ValueError("increment must lie in (0, 1]")

    def apply(self, probability: float, units: int) -> float:
        return min(1.0, probability + units * self.increment)


@dataclass(frozen=True)
class SweepResult:
    """Metrics along a grid of detection increments for one step."""

    step_id: int
    deltas: tuple[float, ...]
    detection: tuple[float, ...]
    ready_residence: tuple[float, ...]
    unimpeded_success: tuple[float, ...]


@dataclass(frozen=True)
class AllocationPlan:
    """Greedy budget allocation outcome; objective_value is the plan's
    metric under the chosen objective and base_value the unallocated one."""

    units: Mapping[int, int]
    budget: int
    objective: Objective
    objective_value: float
    base_value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", dict(self.units))


@dataclass(frozen=True)
class ProfileMetrics:
    """One comparison row: headline metrics for a single detection profile."""

    name: str
    ready_residence: float
    unimpeded_success: float
    fpt_mean: float | None
    fpt_median: int | None
    reach_probability: float
    converged: bool


def _evaluations_spec(spec: ScenarioSpec) -> ScenarioSpec:
    # The construction route follows the supplied profile, whatever method
    # the scenario document declared for its own inline data.
    if spec.method is Method.EVALUATIONS:
        return spec
    return dataclasses.replace(spec, method=Method.EVALUATIONS)


def _with_probability(profile: DetectionProfile, step: int, p: float) -> DetectionProfile:
    probabilities = dict(profile.probabilities)
    probabilities[step] = p
    return DetectionProfile(probabilities=probabilities, provenance=profile.provenance)


def evaluate_profile(
    spec: ScenarioSpec, profile: DetectionProfile, horizon: int = DEFAULT_HORIZON
) -> ProfileMetrics:
    """Headline metrics for one profile on the scenario's chain."""
    matrix = build_chain_evals(_evaluations_spec(spec), profile)
    stationary = steady_state(matrix)
    series = first_passage_distribution(matrix, START_INDEX, matrix.ready_index, horizon)
    return ProfileMetrics(
        name=profile.provenance,
        ready_residence=stationary.ready_residence,
        unimpeded_success=unimpeded_success_probability(matrix),
        fpt_mean=series.mean,
        fpt_median=series.median,
        reach_probability=series.reach_probability,
        converged=stationary.converged,
    )


def sweep_detection(
    spec: ScenarioSpec,
    base_profile: DetectionProfile,
    step: int,
    deltas: Sequence[float],
) -> SweepResult:
    """Clamp-add each delta to one step's detection probability and rebuild.

    Metrics at delta 0 reproduce the base profile's metrics bit for bit.
    """
    if step not in base_profile.probabilities:
        raise ScenarioError(f"step {step} is not in the detection profile")
    grid = tuple(float(d) for d in deltas)
    if any(d < 0.0 for d in grid):
        raise ValueError("deltas must be non-negative")
    eff = _evaluations_spec(spec)
    base_p = float(base_profile.probabilities[step])
    detection: list[float] = []
    ready: list[float] = []
    unimpeded: list[float] = []
    for delta in grid:
        p = min(1.0, base_p + delta)
        matrix = build_chain_evals(eff, _with_probability(base_profile, step, p))
        detection.append(p)
        ready.append(steady_state(matrix).ready_residence)
        unimpeded.append(unimpeded_success_probability(matrix))
    return SweepResult(
        step_id=step,
        deltas=grid,
        detection=tuple(detection),
        ready_residence=tuple(ready),
        unimpeded_success=tuple(unimpeded),
    )


def _score(spec: ScenarioSpec, profile: DetectionProfile, objective: Objective, horizon: int) -> float:
    """Objective as a minimized score; metrics to maximize are negated."""
    matrix = build_chain_evals(spec, profile)
    if objective is Objective.MIN_READY_RESIDENCE:
        return steady_state(matrix).ready_residence
    if objective is Objective.MIN_UNIMPEDED_SUCCESS:
        return unimpeded_success_probability(matrix)
    series = first_passage_distribution(matrix, START_INDEX, matrix.ready_index, horizon)
    # A chain that never reaches Ready within the horizon is ideal here.
    return -series.mean if series.mean is not None else -math.inf


def _metric_from_score(score: float, objective: Objective) -> float:
    return -score if objective is Objective.MAX_MEAN_FIRST_PASSAGE else score


def allocate_budget(
    spec: ScenarioSpec,
    base_profile: DetectionProfile,
    budget: int,
    model: InvestmentModel,
    objective: Objective,
    horizon: int = DEFAULT_HORIZON,
) -> AllocationPlan:
    """Assign whole investment units to steps, one greedy unit at a time.

    Every unit goes to the step whose incremented detection most improves
    the objective, ties broken toward the earliest step. All units are
    spent even when no candidate improves the objective further.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    eff = _evaluations_spec(spec)
    steps = sorted(base_profile.probabilities)

    def profile_for(units: Mapping[int, int]) -> DetectionProfile:
        probabilities = {
            s: model.apply(float(base_profile.probabilities[s]), units[s]) for s in steps
        }
        return DetectionProfile(probabilities=probabilities, provenance=base_profile.provenance)

    units = {s: 0 for s in steps}
    base_score = _score(eff, profile_for(units), objective, horizon)
    current_score = base_score
    for _ in range(budget):
        best_step: int | None = None
        best_score = math.inf
        for s in steps:
            trial = dict(units)
            trial[s] += 1
            score = _score(eff, profile_for(trial), objective, horizon)
            if score < best_score:
                best_step = s
                best_score = score
        assert best_step is not None
        units[best_step] += 1
        current_score = best_score
    return AllocationPlan(
        units=units,
        budget=budget,
        objective=objective,
        objective_value=_metric_from_score(current_score, objective),
        base_value=_metric_from_score(base_score, objective),
    )


def compare_profiles(
    spec: ScenarioSpec,
    profiles: Sequence[DetectionProfile],
    horizon: int = DEFAULT_HORIZON,
) -> list[ProfileMetrics]:
    """One metrics row per profile, in the order given."""
    if not profiles:
        raise ValueError("at least one profile is required")
    return [evaluate_profile(spec, p, horizon) for p in profiles]
