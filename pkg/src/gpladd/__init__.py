"""Multi-step attack chains as discrete-time Markov chains.

Encodes attacker-defender contests over attack graphs, compiles single
chains into row-stochastic transition matrices (from step time-to-success
distributions or from evaluation-derived detection probabilities), and
computes defender metrics: Ready-state residence, first-passage times,
unimpeded-success probability, detection sweeps, and budgeted allocation.
"""

from .analysis import (
    DEFAULT_HORIZON,
    START_INDEX,
    FirstPassageSeries,
    StationaryDistribution,
    Trajectory,
    conditional_state_distribution,
    empirical_first_passage,
    first_passage_distribution,
    occupancy_fractions,
    simulate,
    steady_state,
    unimpeded_success_probability,
)
from .builder import (
    StepTransitionTriple,
    TransitionMatrix,
    build_chain_distributions,
    build_chain_evals,
    export_dot,
    raw_success_probability,
    step_triple,
    validate_matrix,
)
from .evals import (
    ChainMapping,
    DatasetError,
    DefenderLevel,
    DetectionProfile,
    EvaluationsDataset,
    build_detection_profile,
    load_bundled_profiles,
    step_probability,
    substep_category_probability,
)
from .model import (
    AttackGraph,
    AttackerStrategy,
    Condition,
    DefenderStrategy,
    DistributionSpec,
    Family,
    Location,
    Method,
    NodeState,
    ScenarioError,
    ScenarioSpec,
    StrategyDescriptor,
    UnsupportedGraphError,
    attack_success,
    linearize,
    validate_scenario,
)
from .sensitivity import (
    AllocationPlan,
    InvestmentModel,
    Objective,
    ProfileMetrics,
    SweepResult,
    allocate_budget,
    compare_profiles,
    evaluate_profile,
    sweep_detection,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationPlan",
    "AttackGraph",
    "AttackerStrategy",
    "ChainMapping",
    "Condition",
    "DEFAULT_HORIZON",
    "DatasetError",
    "DefenderLevel",
    "DefenderStrategy",
    "DetectionProfile",
    "DistributionSpec",
    "EvaluationsDataset",
    "Family",
    "FirstPassageSeries",
    "InvestmentModel",
    "Location",
    "Method",
    "NodeState",
    "Objective",
    "ProfileMetrics",
    "START_INDEX",
    "ScenarioError",
    "ScenarioSpec",
    "StationaryDistribution",
    "StepTransitionTriple",
    "StrategyDescriptor",
    "SweepResult",
    "Trajectory",
    "TransitionMatrix",
    "UnsupportedGraphError",
    "allocate_budget",
    "attack_success",
    "build_chain_distributions",
    "build_chain_evals",
    "build_detection_profile",
    "compare_profiles",
    "conditional_state_distribution",
    "empirical_first_passage",
    "evaluate_profile",
    "export_dot",
    "first_passage_distribution",
    "linearize",
    "load_bundled_profiles",
    "occupancy_fractions",
    "raw_success_probability",
    "simulate",
    "steady_state",
    "step_probability",
    "step_triple",
    "substep_category_probability",
    "sweep_detection",
    "unimpeded_success_probability",
    "validate_matrix",
    "validate_scenario",
]
