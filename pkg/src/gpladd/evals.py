"""Detection-probability inference from endpoint-evaluation detection records.

A dataset lists vendors, tested sub-steps, and (vendor, substep, category)
detection records. The probability that one sub-step is detected through one
category is the fraction of vendors with at least one such record. A scenario
step aggregates by taking the maximum over its mapped sub-steps and over the
categories visible to the defender level; since the category sets are nested,
a better-equipped defender can never see less.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Mapping, Sequence


class DatasetError(ValueError):
    """An evaluation dataset, mapping, or profile violates an invariant."""


CATEGORY_IOC = "ioc"
CATEGORY_SPECIFIC_ALERT = "specific_alert"
CATEGORY_GENERAL_ALERT = "general_alert"

#: Categories that participate in defender-level aggregation. Records with
#: any other category label are retained in the dataset but never counted.
NAMED_CATEGORIES = (CATEGORY_IOC, CATEGORY_SPECIFIC_ALERT, CATEGORY_GENERAL_ALERT)


class DefenderLevel(enum.Enum):
    """Nested defender capability levels over detection categories."""

    BLUE0 = "blue0"
    BLUE1 = "blue1"
    BLUE2 = "blue2"

    @property
    def categories(self) -> frozenset[str]:
        return _LEVEL_CATEGORIES[self]


_LEVEL_CATEGORIES = {
    DefenderLevel.BLUE0: frozenset({CATEGORY_IOC}),
    DefenderLevel.BLUE1: frozenset({CATEGORY_IOC, CATEGORY_SPECIFIC_ALERT}),
    DefenderLevel.BLUE2: frozenset({CATEGORY_IOC, CATEGORY_SPECIFIC_ALERT, CATEGORY_GENERAL_ALERT}),
}


@dataclass(frozen=True)
class EvaluationsDataset:
    """Vendors, sub-steps, and deduplicated detection records."""

    vendors: tuple[str, ...]
    substeps: tuple[str, ...]
    detections: frozenset[tuple[str, str, str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vendors", tuple(self.vendors))
        object.__setattr__(self, "substeps", tuple(self.substeps))
        object.__setattr__(self, "detections", frozenset(tuple(r) for r in self.detections))
        if not self.vendors:
            raise DatasetError("dataset needs at least one vendor")
        if len(set(self.vendors)) != len(self.vendors):
            raise DatasetError("duplicate vendor ids")
        if len(set(self.substeps)) != len(self.substeps):
            raise DatasetError("duplicate substep ids")
        vendors = set(self.vendors)
        substeps = set(self.substeps)
        for record in self.detections:
            if len(record) != 3:
                raise DatasetError(f"malformed detection record {record!r}")
            vendor, substep, category = record
            if vendor not in vendors:
                raise DatasetError(f"detection references unknown vendor {vendor!r}")
            if substep not in substeps:
                raise DatasetError(f"detection references unknown substep {substep!r}")
            if not category or not isinstance(category, str):
                raise DatasetError(f"detection for {vendor!r}/{substep!r} has an empty category")


@dataclass(frozen=True)
class ChainMapping:
    """Scenario step id -> tested sub-steps; an empty list means no
    evaluation coverage and therefore detection probability zero."""

    name: str
    steps: Mapping[int, tuple[str, ...]]

    def __post_init__(self) -> None:
        normalized: dict[int, tuple[str, ...]] = {}
        for step, substeps in self.steps.items():
            if not isinstance(step, int) or isinstance(step, bool):
                raise DatasetError(f"mapping step {step!r} is not an integer id")
            normalized[step] = tuple(str(s) for s in substeps)
        object.__setattr__(self, "steps", normalized)


@dataclass(frozen=True)
class DetectionProfile:
    """Per-step detection probabilities for one defender/chain pairing."""

    probabilities: Mapping[int, float]
    provenance: str = "manual"

    def __post_init__(self) -> None:
        object.__setattr__(self, "probabilities", dict(self.probabilities))
        for step, p in self.probabilities.items():
            if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
                raise DatasetError(f"profile probability for step {step} outside [0, 1]: {p!r}")


def substep_category_probability(ds: EvaluationsDataset, substep: str, category: str) -> float:
    """Fraction of vendors with at least one record for (substep, category).

    Kept at full precision; every value is an exact multiple of
    1/len(ds.vendors), rounding happens only at display time.
    """
    if substep not in ds.substeps:
        raise DatasetError(f"unknown substep {substep!r}")
    hits = {vendor for vendor, sub, cat in ds.detections if sub == substep and cat == category}
    return len(hits) / len(ds.vendors)


def step_probability(ds: EvaluationsDataset, mapping: ChainMapping, step: int, level: DefenderLevel) -> float:
    """Ceiling (maximum) over mapped sub-steps and level-visible categories."""
    if step not in mapping.steps:
        raise DatasetError(f"step {step} is not covered by mapping {mapping.name!r}")
    best = 0.0
    for substep in mapping.steps[step]:
        for category in sorted(level.categories):
            best = max(best, substep_category_probability(ds, substep, category))
    return best


def build_detection_profile(
    ds: EvaluationsDataset,
    mapping: ChainMapping,
    level: DefenderLevel,
    required_steps: Iterable[int] | None = None,
) -> DetectionProfile:
    """Infer one detection probability per mapped step.

    When required_steps is given, the mapping must cover all of them; the
    bundled mappings list every scenario step explicitly, including steps
    with no evaluation coverage.
    """
    if required_steps is not None:
        missing = sorted(set(required_steps) - set(mapping.steps))
        if missing:
            raise DatasetError(f"mapping {mapping.name!r} does not cover steps {missing}")
    probabilities = {step: step_probability(ds, mapping, step, level) for step in sorted(mapping.steps)}
    return DetectionProfile(probabilities=probabilities, provenance=f"{level.value}:{mapping.name}")


# Published per-step detection probabilities for the six bundled
# (attack variant, defender level) evaluations, at two-decimal precision.
# Naming: B<variant><level>, e.g. B21 = attack chain 2 with defender blue1.
_BUNDLED_ROWS: dict[str, dict[int, float]] = {
    "B10": {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.0, 5: 0.0, 6: 0.08, 7: 0.0, 8: 0.0, 9: 0.0},
    "B11": {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.58, 5: 0.08, 6: 0.17, 7: 0.0, 8: 0.0, 9: 0.67},
    "B12": {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.58, 5: 0.08, 6: 0.17, 7: 0.17, 8: 0.25, 9: 0.67},
    "B20": {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.17, 5: 0.0, 6: 0.08, 7: 0.0, 8: 0.0, 9: 0.0},
    "B21": {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.75, 5: 0.5, 6: 0.17, 7: 0.0, 8: 0.0, 9: 0.42},
    "B22": {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.75, 5: 0.5, 6: 0.17, 7: 0.08, 8: 0.42, 9: 0.42},
}

BUNDLED_PROFILE_NAMES: Sequence[str] = tuple(sorted(_BUNDLED_ROWS))


def load_bundled_profiles() -> dict[str, DetectionProfile]:
    """The six bundled detection profiles, bypassing ingestion."""
    return {
        name: DetectionProfile(probabilities=dict(row), provenance=f"bundled:{name}")
        for name, row in _BUNDLED_ROWS.items()
    }
