"""Bundled scenario, datasets, and reference values shipped with the package.

The notional nine-step scenario models a phishing campaign that pivots from
an enterprise network to an industrial control network and ends with remote
terminal units under attacker control. Its hourly transition probabilities
were assembled from published compromise studies and practitioner estimates;
the raw per-step success probabilities in the scenario file are back-solved
from those composite rows (p_succ / (1 - p_det)) and are fixtures rather
than measurements. The evaluation datasets are likewise synthetic
vendor-count fixtures constructed to reproduce the bundled detection
profiles at twelfths granularity.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .evals import ChainMapping, EvaluationsDataset
from .io import load_chain_mapping, load_evaluations_dataset, load_scenario_document
from .model import ScenarioSpec, validate_scenario

CHAIN_NAMES = ("chain1", "chain2")


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(str(resources.files(__package__).joinpath("data", name)))


def notional_scenario_path() -> Path:
    return data_path("notional_apt3.json")


def notional_scenario_document() -> dict:
    return load_scenario_document(notional_scenario_path())


def notional_scenario() -> ScenarioSpec:
    return validate_scenario(notional_scenario_document())


def evaluations_dataset_path(chain: str) -> Path:
    _check_chain(chain)
    return data_path(f"evals_{chain}.json")


def chain_mapping_path(chain: str) -> Path:
    _check_chain(chain)
    return data_path(f"{chain}_mapping.json")


def load_bundled_dataset(chain: str) -> EvaluationsDataset:
    return load_evaluations_dataset(evaluations_dataset_path(chain))


def load_bundled_mapping(chain: str) -> ChainMapping:
    return load_chain_mapping(chain_mapping_path(chain), name=chain)


def _check_chain(chain: str) -> None:
    if chain not in CHAIN_NAMES:
        raise ValueError(f"unknown chain {chain!r}; expected one of {CHAIN_NAMES}")


def reference_transition_matrix() -> np.ndarray:
    """Published hourly transition rows for the notional scenario.

    Row i lists the probabilities of moving from step i+1 to each step; the
    distributions build of the bundled scenario reproduces these entries.
    """
    rows = np.array(
        [
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.05, 0.0, 0.95, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.65, 0.0, 0.13, 0.22, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.25, 0.0, 0.0, 0.0, 0.75, 0.0, 0.0, 0.0, 0.0],
            [0.25, 0.0, 0.0, 0.0, 0.28, 0.47, 0.0, 0.0, 0.0],
            [0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.95, 0.0, 0.0],
            [0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.9, 0.0],
            [0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.18, 0.32],
            [0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.95],
        ]
    )
    rows.setflags(write=False)
    return rows
