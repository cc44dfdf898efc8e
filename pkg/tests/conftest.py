from __future__ import annotations

import dataclasses

import pytest

from gpladd import fixtures
from gpladd.builder import build_chain_distributions, build_chain_evals
from gpladd.evals import load_bundled_profiles
from gpladd.model import Method


@pytest.fixture(scope="session")
def scenario():
    return fixtures.notional_scenario()


@pytest.fixture(scope="session")
def evals_scenario(scenario):
    return dataclasses.replace(scenario, method=Method.EVALUATIONS)


@pytest.fixture(scope="session")
def profiles():
    return load_bundled_profiles()


@pytest.fixture(scope="session")
def distributions_matrix(scenario):
    return build_chain_distributions(scenario)


@pytest.fixture(scope="session")
def evals_matrices(evals_scenario, profiles):
    return {name: build_chain_evals(evals_scenario, p) for name, p in profiles.items()}


def profile_detection_vector(profile) -> list[float]:
    """Detection probabilities as a list ordered by step id."""
    return [profile.probabilities[step] for step in sorted(profile.probabilities)]
