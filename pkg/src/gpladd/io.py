"""File formats and deterministic exports.

Scenario documents, evaluation datasets, chain mappings, and detection
profiles are all JSON. Numeric CSV exports use six-decimal fixed formatting,
a header row, and LF line endings so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from collections.abc import Mapping as MappingABC
from pathlib import Path
from typing import Iterable, Sequence

from .evals import ChainMapping, DatasetError, DetectionProfile, EvaluationsDataset
from .model import Family, ScenarioError, ScenarioSpec, validate_scenario


def _read_json(path: str | Path, error: type[ValueError]):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise error(f"{p}: file not found") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise error(f"{p}: invalid JSON ({exc})") from None


def load_scenario_document(path: str | Path) -> dict:
    document = _read_json(path, ScenarioError)
    if not isinstance(document, MappingABC):
        raise ScenarioError(f"{path}: scenario document must be a JSON object")
    return dict(document)


def load_scenario(path: str | Path) -> ScenarioSpec:
    return validate_scenario(load_scenario_document(path))


def scenario_to_document(spec: ScenarioSpec) -> dict:
    """Serialize a normalized spec back to the scenario document format."""
    steps = []
    for chain in spec.graph.chains:
        for cid in chain:
            condition = spec.graph.conditions_by_id[cid]
            steps.append(
                {
                    "id": condition.id,
                    "name": condition.name,
                    "description": condition.description,
                    "location": condition.location.value,
                }
            )
    document: dict = {
        "name": spec.name,
        "steps": steps,
        "ready_id": spec.ready_id,
        "method": spec.method.value,
        "dt_hours": spec.time_step_hours,
        "detection": {str(k): v for k, v in sorted(spec.strategy.defender.detection.items())},
        "rollback": {str(k): v for k, v in sorted(spec.strategy.defender.rollback.items())},
    }
    if spec.step_distributions:
        document["distributions"] = {
            str(k): _distribution_document(d) for k, d in sorted(spec.step_distributions.items())
        }
    return document


def _distribution_document(dist) -> dict:
    if dist.family is Family.EXPONENTIAL:
        return {"family": dist.family.value, "rate": dist.rate}
    if dist.family is Family.WEIBULL:
        return {"family": dist.family.value, "shape": dist.shape, "scale": dist.scale}
    return {"family": dist.family.value, "p": dist.p}


def load_evaluations_dataset(path: str | Path) -> EvaluationsDataset:
    document = _read_json(path, DatasetError)
    if not isinstance(document, MappingABC):
        raise DatasetError(f"{path}: dataset must be a JSON object")
    vendors = document.get("vendors")
    substeps = document.get("substeps")
    records = document.get("detections", [])
    if not isinstance(vendors, list) or not isinstance(substeps, list) or not isinstance(records, list):
        raise DatasetError(f"{path}: dataset needs vendors, substeps, and detections lists")
    detections = set()
    for record in records:
        if not isinstance(record, MappingABC):
            raise DatasetError(f"{path}: detection records must be objects")
        try:
            detections.add((str(record["vendor"]), str(record["substep"]), str(record["category"])))
        except KeyError as exc:
            raise DatasetError(f"{path}: detection record missing field {exc}") from None
    return EvaluationsDataset(
        vendors=tuple(str(v) for v in vendors),
        substeps=tuple(str(s) for s in substeps),
        detections=frozenset(detections),
    )


def load_chain_mapping(path: str | Path, name: str | None = None) -> ChainMapping:
    document = _read_json(path, DatasetError)
    if not isinstance(document, MappingABC):
        raise DatasetError(f"{path}: chain mapping must be a JSON object")
    steps: dict[int, tuple[str, ...]] = {}
    for key, value in document.items():
        try:
            step = int(key)
        except (TypeError, ValueError):
            raise DatasetError(f"{path}: mapping key {key!r} is not a step id") from None
        if not isinstance(value, list):
            raise DatasetError(f"{path}: mapping for step {key} must be a list of substeps")
        steps[step] = tuple(str(s) for s in value)
    return ChainMapping(name=name or Path(path).stem, steps=steps)


def load_detection_profile(path: str | Path) -> DetectionProfile:
    document = _read_json(path, DatasetError)
    if not isinstance(document, MappingABC):
        raise DatasetError(f"{path}: detection profile must be a JSON object")
    probabilities_doc = document.get("probabilities")
    if not isinstance(probabilities_doc, MappingABC):
        raise DatasetError(f"{path}: profile needs a probabilities object")
    probabilities: dict[int, float] = {}
    for key, value in probabilities_doc.items():
        try:
            step = int(key)
        except (TypeError, ValueError):
            raise DatasetError(f"{path}: probability key {key!r} is not a step id") from None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DatasetError(f"{path}: probability for step {key} must be numeric")
        probabilities[step] = float(value)
    return DetectionProfile(
        probabilities=probabilities,
        provenance=str(document.get("provenance", "manual")),
    )


def detection_profile_document(profile: DetectionProfile) -> dict:
    return {
        "probabilities": {str(k): v for k, v in sorted(profile.probabilities.items())},
        "provenance": profile.provenance,
    }


def canonical_json(document: object) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_detection_profile(path: str | Path, profile: DetectionProfile) -> None:
    write_text(path, canonical_json(detection_profile_document(profile)))


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    write_text(path, csv_text(header, rows))


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
