"""Domain model for multi-step attacker-defender contests on attack graphs.

An attack couples an attack graph (ordered chains of success conditions)
with attacker and defender strategy descriptors. Scenario documents parsed
from the external JSON format are normalized so condition ids run 1..n in
chain order; the id of a step then equals its Markov state number, which
keeps matrices, profiles, and exports directly addressable by step.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping as MappingABC
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping


class ScenarioError(ValueError):
    """A scenario document or spec violates a model invariant."""


class UnsupportedGraphError(ScenarioError):
    """Graph shape is valid for the model but outside chain-compilation scope."""


class Location(str, enum.Enum):
    INSIDE = "inside-defender-system"
    EXTERNAL = "external"


class NodeState(enum.IntEnum):
    """State of a single contested node; codes are fixed."""

    DEFENDER_CONTROL = 0
    ATTACKER_CONTROL = 1
    ATTACK_IN_PROGRESS = 2


class AttackerStrategy(str, enum.Enum):
    # The eager attacker starts a step as soon as its preconditions hold;
    # campaign restarts are implicit in the transition structure.
    EAGER = "eager"


class Method(str, enum.Enum):
    DISTRIBUTIONS = "distributions"
    EVALUATIONS = "evaluations"


class Family(str, enum.Enum):
    EXPONENTIAL = "exponential"
    WEIBULL = "weibull"
    FIXED = "fixed_raw_probability"


@dataclass(frozen=True)
class DistributionSpec:
    """Per-step time-to-success distribution, consumed by the chain builder.

    Exponential takes a rate per hour, Weibull a shape and a scale in hours,
    and the fixed family bypasses integration with an already-discretized
    per-time-step success probability.
    """

    family: Family
    rate: float | None = None
    shape: float | None = None
    scale: float | None = None
    p: float | None = None

    def __post_init__(self) -> None:
        if self.family is Family.EXPONENTIAL:
            if self.rate is None or self.rate <= 0:
                raise ScenarioError("exponential distribution needs rate > 0")
        elif self.family is Family.WEIBULL:
            if self.shape is None or self.shape <= 0:
                raise ScenarioError("weibull distribution needs shape > 0")
            if self.scale is None or self.scale <= 0:
                raise ScenarioError("weibull distribution needs scale > 0")
        elif self.family is Family.FIXED:
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ScenarioError("fixed raw probability must lie in [0, 1]")
        else:  # pragma: no cover - enum exhausts families
            raise ScenarioError(f"unknown distribution family {self.family!r}")

    @classmethod
    def exponential(cls, rate: float) -> "DistributionSpec":
        return cls(Family.EXPONENTIAL, rate=float(rate))

    @classmethod
    def weibull(cls, shape: float, scale: float) -> "DistributionSpec":
        return cls(Family.WEIBULL, shape=float(shape), scale=float(scale))

    @classmethod
    def fixed(cls, p: float) -> "DistributionSpec":
        return cls(Family.FIXED, p=float(p))


@dataclass(frozen=True)
class Condition:
    """One success condition (attack step) in the graph."""

    id: int
    name: str
    description: str = ""
    location: Location = Location.INSIDE

    def __post_init__(self) -> None:
        if not isinstance(self.id, int) or isinstance(self.id, bool):
            raise ScenarioError(f"condition id must be an integer, got {self.id!r}")
        if not self.name:
            raise ScenarioError(f"condition {self.id} has an empty name")


@dataclass(frozen=True)
class AttackGraph:
    """Ordered chains of condition ids; the last condition of each chain is
    terminal and the conjunction of terminals defines attack success."""

    conditions: tuple[Condition, ...]
    chains: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "chains", tuple(tuple(c) for c in self.chains))
        ids = [c.id for c in self.conditions]
        if len(set(ids)) != len(ids):
            raise ScenarioError("duplicate condition ids in attack graph")
        if not self.chains:
            raise ScenarioError("attack graph has no chains")
        known = set(ids)
        seen: set[int] = set()
        for chain in self.chains:
            if not chain:
                raise ScenarioError("attack graph contains an empty chain")
            for cid in chain:
                if cid not in known:
                    raise ScenarioError(f"chain references unknown condition {cid}")
                if cid in seen:
                    raise ScenarioError(f"condition {cid} appears on more than one chain position")
                seen.add(cid)
        if seen != known:
            raise ScenarioError("every condition must appear on exactly one chain")

    @property
    def terminal_set(self) -> frozenset[int]:
        return frozenset(chain[-1] for chain in self.chains)

    @cached_property
    def conditions_by_id(self) -> Mapping[int, Condition]:
        return {c.id: c for c in self.conditions}


@dataclass(frozen=True)
class DefenderStrategy:
    """Per-step detection probabilities and where detection sends the attacker."""

    detection: Mapping[int, float] = field(default_factory=dict)
    rollback: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "detection", dict(self.detection))
        object.__setattr__(self, "rollback", dict(self.rollback))
        for step, p in self.detection.items():
            if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
                raise ScenarioError(f"detection probability for step {step} outside [0, 1]: {p!r}")


@dataclass(frozen=True)
class StrategyDescriptor:
    defender: DefenderStrategy = field(default_factory=DefenderStrategy)
    attacker: AttackerStrategy = AttackerStrategy.EAGER


@dataclass(frozen=True)
class ScenarioSpec:
    """A validated scenario: graph, Ready step, strategies, and the chain
    construction method with its inputs."""

    name: str
    graph: AttackGraph
    ready_id: int
    strategy: StrategyDescriptor
    method: Method
    step_distributions: Mapping[int, DistributionSpec] | None = None
    time_step_hours: float = 1.0

    def __post_init__(self) -> None:
        if (
            not isinstance(self.time_step_hours, (int, float))
            or isinstance(self.time_step_hours, bool)
            or self.time_step_hours <= 0
        ):
            raise ScenarioError("time_step_hours must be a positive number")
        object.__setattr__(self, "time_step_hours", float(self.time_step_hours))
        if self.ready_id not in self.graph.terminal_set:
            raise ScenarioError(f"ready step {self.ready_id} must be the terminal condition of a chain")
        known = self.graph.conditions_by_id
        positions: dict[int, tuple[tuple[int, ...], int]] = {}
        for chain in self.graph.chains:
            for pos, cid in enumerate(chain):
                positions[cid] = (chain, pos)
        defender = self.strategy.defender
        for step in defender.detection:
            if step not in known:
                raise ScenarioError(f"detection entry for unknown step {step}")
        for step, target in defender.rollback.items():
            if step not in known:
                raise ScenarioError(f"rollback entry for unknown step {step}")
            if target not in known:
                raise ScenarioError(f"rollback target {target} for step {step} is not a step")
            chain, pos = positions[step]
            tchain, tpos = positions[target]
            if tchain != chain or not (tpos < pos or tpos == 0):
                raise ScenarioError(
                    f"rollback target {target} for step {step} must precede it in its chain or be the chain start"
                )
        if self.step_distributions is not None:
            object.__setattr__(self, "step_distributions", dict(self.step_distributions))
            for step in self.step_distributions:
                if step not in known:
                    raise ScenarioError(f"distribution entry for unknown step {step}")
        if self.method is Method.DISTRIBUTIONS:
            dists = self.step_distributions or {}
            for chain in self.graph.chains:
                for cid in chain[:-1]:
                    if cid not in dists:
                        raise ScenarioError(
                            f"step {cid} needs a time-to-success distribution under the distributions method"
                        )


def _parse_step_key(key: object, id_map: Mapping[int, int], field_name: str) -> int:
    try:
        orig = int(key)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ScenarioError(f"{field_name} key {key!r} is not a step id") from None
    if orig not in id_map:
        raise ScenarioError(f"{field_name} entry references unknown step {orig}")
    return id_map[orig]


def _parse_number(obj: MappingABC, key: str) -> float:
    value = obj.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioError(f"distribution parameter {key!r} must be numeric")
    return float(value)


def _parse_distribution(obj: object) -> DistributionSpec:
    if not isinstance(obj, MappingABC):
        raise ScenarioError("distribution entry must be an object")
    family_raw = obj.get("family")
    try:
        family = Family(family_raw)
    except ValueError:
        raise ScenarioError(f"unknown distribution family {family_raw!r}") from None
    if family is Family.EXPONENTIAL:
        return DistributionSpec.exponential(_parse_number(obj, "rate"))
    if family is Family.WEIBULL:
        return DistributionSpec.weibull(_parse_number(obj, "shape"), _parse_number(obj, "scale"))
    return DistributionSpec.fixed(_parse_number(obj, "p"))


def validate_scenario(document: object) -> ScenarioSpec:
    """Parse and normalize a scenario document into a validated spec.

    Step ids are renumbered densely to 1..n in chain order; detection,
    rollback, and distribution keys are remapped accordingly, and missing
    detection (0.0) and rollback (chain start) entries are filled in.
    Raises ScenarioError on the first violated invariant.
    """
    if not isinstance(document, MappingABC):
        raise ScenarioError("scenario document must be a JSON object")
    steps_raw = document.get("steps")
    if not isinstance(steps_raw, list) or not steps_raw:
        raise ScenarioError("scenario must define a non-empty steps list")

    orig_ids: list[int] = []
    conditions: list[Condition] = []
    for position, entry in enumerate(steps_raw, start=1):
        if not isinstance(entry, MappingABC):
            raise ScenarioError(f"step {position} must be an object")
        raw_id = entry.get("id", position)
        if not isinstance(raw_id, int) or isinstance(raw_id, bool):
            raise ScenarioError(f"step {position} id must be an integer")
        if raw_id in orig_ids:
            raise ScenarioError(f"duplicate step id {raw_id}")
        orig_ids.append(raw_id)
        loc_raw = entry.get("location", Location.INSIDE.value)
        try:
            location = Location(loc_raw)
        except ValueError:
            raise ScenarioError(f"step {raw_id} has unknown location {loc_raw!r}") from None
        conditions.append(
            Condition(
                id=position,
                name=str(entry.get("name", "")),
                description=str(entry.get("description", "")),
                location=location,
            )
        )

    id_map = {orig: i + 1 for i, orig in enumerate(orig_ids)}
    chain = tuple(range(1, len(orig_ids) + 1))
    graph = AttackGraph(conditions=tuple(conditions), chains=(chain,))

    ready_raw = document.get("ready_id")
    if not isinstance(ready_raw, int) or isinstance(ready_raw, bool) or ready_raw not in id_map:
        raise ScenarioError(f"ready_id {ready_raw!r} is not a step id")

    method_raw = document.get("method")
    try:
        method = Method(method_raw)
    except ValueError:
        raise ScenarioError(f"unknown method {method_raw!r}") from None

    detection = {i: 0.0 for i in chain}
    detection_doc = document.get("detection") or {}
    if not isinstance(detection_doc, MappingABC):
        raise ScenarioError("detection must be an object keyed by step id")
    for key, value in detection_doc.items():
        sid = _parse_step_key(key, id_map, "detection")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ScenarioError(f"detection probability for step {key} must be numeric")
        detection[sid] = float(value)

    rollback = {i: chain[0] for i in chain}
    rollback_doc = document.get("rollback") or {}
    if not isinstance(rollback_doc, MappingABC):
        raise ScenarioError("rollback must be an object keyed by step id")
    for key, value in rollback_doc.items():
        sid = _parse_step_key(key, id_map, "rollback")
        if value == "start":
            rollback[sid] = chain[0]
        elif isinstance(value, int) and not isinstance(value, bool) and value in id_map:
            rollback[sid] = id_map[value]
        else:
            raise ScenarioError(f"rollback target {value!r} for step {key} is not a step id or 'start'")

    distributions: dict[int, DistributionSpec] | None = None
    dist_doc = document.get("distributions")
    if dist_doc:
        if not isinstance(dist_doc, MappingABC):
            raise ScenarioError("distributions must be an object keyed by step id")
        distributions = {}
        for key, value in dist_doc.items():
            distributions[_parse_step_key(key, id_map, "distributions")] = _parse_distribution(value)

    dt_raw = document.get("dt_hours", 1.0)
    if not isinstance(dt_raw, (int, float)) or isinstance(dt_raw, bool):
        raise ScenarioError("dt_hours must be numeric")

    return ScenarioSpec(
        name=str(document.get("name", "scenario")),
        graph=graph,
        ready_id=id_map[ready_raw],
        strategy=StrategyDescriptor(defender=DefenderStrategy(detection=detection, rollback=rollback)),
        method=method,
        step_distributions=distributions,
        time_step_hours=float(dt_raw),
    )


def attack_success(assignment: Mapping[int, bool], graph: AttackGraph) -> bool:
    """True iff every terminal condition of the graph is satisfied."""
    missing = sorted(cid for cid in graph.terminal_set if cid not in assignment)
    if missing:
        raise ScenarioError(f"assignment is missing terminal conditions {missing}")
    return all(bool(assignment[cid]) for cid in graph.terminal_set)


def linearize(graph: AttackGraph) -> tuple[int, ...]:
    """Condition ids of the single chain, in Start..Ready order.

    Multi-chain graphs keep a working success predicate but are not
    compiled to a single Markov chain.
    """
    if len(graph.chains) != 1:
        raise UnsupportedGraphError("chain compilation supports single-chain graphs only")
    return tuple(graph.chains[0])
