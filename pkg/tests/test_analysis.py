from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import profile_detection_vector
from gpladd.analysis import (
    START_INDEX,
    conditional_state_distribution,
    empirical_first_passage,
    first_passage_distribution,
    occupancy_fractions,
    simulate,
    steady_state,
    unimpeded_success_probability,
)
from gpladd.builder import TransitionMatrix, build_chain_evals
from gpladd.evals import DetectionProfile
from gpladd.model import validate_scenario


def swap_matrix() -> TransitionMatrix:
    return TransitionMatrix(labels=("a", "b"), entries=np.array([[0.0, 1.0], [1.0, 0.0]]), ready_index=1)


def forward_two_state() -> TransitionMatrix:
    return TransitionMatrix(labels=("a", "b"), entries=np.array([[0.0, 1.0], [0.0, 1.0]]), ready_index=1)


def synthetic_chain(dets: list[float]) -> TransitionMatrix:
    """Evaluations-style chain for an arbitrary detection vector."""
    n = len(dets)
    document = {
        "name": "synthetic",
        "steps": [{"id": i, "name": f"s{i}"} for i in range(1, n + 1)],
        "ready_id": n,
        "method": "evaluations",
    }
    profile = DetectionProfile({i + 1: dets[i] for i in range(n)})
    return build_chain_evals(validate_scenario(document), profile)


class TestSteadyState:
    def test_two_state_swap(self):
        result = steady_state(swap_matrix())
        assert result.converged
        assert result.occupancy == pytest.approx([0.5, 0.5], abs=1e-10)

    def test_b20_mass_absorbs_at_ready(self, evals_matrices):
        result = steady_state(evals_matrices["B20"])
        assert result.converged
        assert abs(result.ready_residence - 1.0) <= 1e-9

    @pytest.mark.parametrize("name", ["B21", "B22", "B11", "B12"])
    def test_matches_renewal_oracle(self, name, evals_matrices, profiles):
        result = steady_state(evals_matrices[name])
        expected = oracles.renewal_ready_residence(profile_detection_vector(profiles[name]))
        assert result.ready_residence == pytest.approx(expected, abs=1e-8)

    def test_b21_b22_reference_values(self, evals_matrices):
        assert steady_state(evals_matrices["B21"]).ready_residence == pytest.approx(0.0511, abs=1e-3)
        assert steady_state(evals_matrices["B22"]).ready_residence == pytest.approx(0.0280, abs=1e-3)

    def test_occupancy_is_a_distribution(self, evals_matrices, distributions_matrix):
        for matrix in [distributions_matrix, *evals_matrices.values()]:
            occupancy = steady_state(matrix).occupancy
            assert occupancy.min() >= 0.0
            assert abs(occupancy.sum() - 1.0) <= 1e-9

    def test_fixed_point_of_one_more_transition(self, evals_matrices, distributions_matrix):
        for matrix in [distributions_matrix, *evals_matrices.values()]:
            occupancy = steady_state(matrix).occupancy
            assert np.max(np.abs(occupancy @ matrix.entries - occupancy)) < 1e-9

    def test_power_iteration_agrees_when_chain_has_self_loop(self, distributions_matrix, evals_matrices):
        # Guards against periodicity artifacts: these chains have a self-loop
        # somewhere on the Start-to-Ready cycle, so plain power iteration is
        # valid and must agree with the time-average limit.
        for matrix in [distributions_matrix, evals_matrices["B21"], evals_matrices["B22"]]:
            plain = oracles.power_iteration(matrix.entries)
            averaged = steady_state(matrix).occupancy
            assert np.max(np.abs(plain - averaged)) < 1e-8

    def test_iteration_cap_reports_nonconvergence(self, evals_matrices):
        result = steady_state(evals_matrices["B21"], max_iterations=3)
        assert not result.converged
        assert result.iterations_used == 3


class TestFirstPassage:
    def test_b20_straight_run_mass(self, evals_matrices):
        series = first_passage_distribution(evals_matrices["B20"], START_INDEX, 8, horizon=200)
        assert series.probabilities[7] == pytest.approx(0.83 * 0.92, abs=1e-12)
        assert series.probabilities[:7] == pytest.approx(np.zeros(7), abs=0.0)

    def test_b20_reach_probability_grows_to_one(self, evals_matrices):
        short = first_passage_distribution(evals_matrices["B20"], START_INDEX, 8, horizon=20)
        long = first_passage_distribution(evals_matrices["B20"], START_INDEX, 8, horizon=400)
        assert short.reach_probability < long.reach_probability
        assert long.reach_probability == pytest.approx(1.0, abs=1e-9)

    def test_b21_straight_run_mass(self, evals_matrices):
        series = first_passage_distribution(evals_matrices["B21"], START_INDEX, 8, horizon=200)
        assert series.probabilities[7] == pytest.approx(0.1038, abs=1e-4)

    def test_deterministic_two_state_chain(self):
        series = first_passage_distribution(forward_two_state(), 0, 1, horizon=10)
        assert series.probabilities[0] == 1.0
        assert series.probabilities[1:].sum() == 0.0
        assert series.mean == 1.0
        assert series.median == 1

    def test_source_equals_target_convention(self, evals_matrices):
        series = first_passage_distribution(evals_matrices["B21"], 2, 2, horizon=50)
        assert series.reach_probability == 1.0
        assert series.mean == 0.0
        assert series.median == 0
        assert series.probabilities.sum() == 0.0

    def test_matches_dense_power_oracle(self, evals_matrices):
        matrix = evals_matrices["B22"]
        expected = oracles.first_passage_by_absorption(matrix.entries, START_INDEX, 8, 60)
        series = first_passage_distribution(matrix, START_INDEX, 8, horizon=60)
        assert series.probabilities == pytest.approx(expected, abs=1e-12)

    def test_summary_conditional_on_reach(self, evals_matrices):
        series = first_passage_distribution(evals_matrices["B21"], START_INDEX, 8, horizon=500)
        f = series.probabilities
        t = np.arange(1, 501)
        assert series.mean == pytest.approx((t * f).sum() / f.sum())
        cumulative = np.cumsum(f)
        assert cumulative[series.median - 2] < 0.5 * series.reach_probability
        assert cumulative[series.median - 1] >= 0.5 * series.reach_probability
        assert series.quantiles[0.25] <= series.median <= series.quantiles[0.9]

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=2, max_size=9
        )
    )
    def test_no_mass_before_graph_distance(self, dets):
        matrix = synthetic_chain(dets)
        horizon = 30
        series = first_passage_distribution(matrix, START_INDEX, matrix.ready_index, horizon)
        # Shortest positive-probability path from Start to Ready.
        n = matrix.n_states
        dist = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for src in frontier:
                for dst in range(n):
                    if matrix.entries[src, dst] > 0 and dst not in dist:
                        dist[dst] = dist[src] + 1
                        nxt.append(dst)
            frontier = nxt
        if matrix.ready_index not in dist:
            assert series.probabilities.sum() == 0.0
        else:
            d = dist[matrix.ready_index]
            assert all(series.probabilities[t] == 0.0 for t in range(min(d - 1, horizon)))

    def test_horizon_must_be_positive(self, evals_matrices):
        with pytest.raises(ValueError):
            first_passage_distribution(evals_matrices["B20"], 0, 8, horizon=0)


class TestUnimpededSuccess:
    @pytest.mark.parametrize(
        "name,expected",
        [("B20", 0.7636), ("B21", 0.1038), ("B22", 0.0554), ("B12", 0.1996)],
    )
    def test_reference_values(self, name, expected, evals_matrices):
        assert unimpeded_success_probability(evals_matrices[name]) == pytest.approx(expected, abs=1e-4)

    @pytest.mark.parametrize("name", ["B10", "B11", "B12", "B20", "B21", "B22"])
    def test_equals_first_passage_at_distance(self, name, evals_matrices):
        matrix = evals_matrices[name]
        d = matrix.ready_index - START_INDEX
        series = first_passage_distribution(matrix, START_INDEX, matrix.ready_index, horizon=d)
        assert abs(unimpeded_success_probability(matrix) - series.probabilities[d - 1]) <= 1e-12

    def test_matches_product_oracle(self, evals_matrices, profiles):
        for name, matrix in evals_matrices.items():
            expected = oracles.forward_product(profile_detection_vector(profiles[name]))
            assert unimpeded_success_probability(matrix) == pytest.approx(expected, abs=1e-12)

    def test_zero_detection_gives_certainty(self):
        matrix = synthetic_chain([0.0] * 5)
        assert unimpeded_success_probability(matrix) == 1.0


class TestConditionalStateDistribution:
    def test_zero_elapsed_is_point_mass(self, evals_matrices):
        v = conditional_state_distribution(evals_matrices["B21"], 3, 0)
        assert v[3] == 1.0
        assert v.sum() == 1.0

    def test_b20_one_step_from_step4(self, evals_matrices):
        v = conditional_state_distribution(evals_matrices["B20"], 3, 1)
        assert v[0] == pytest.approx(0.17)
        assert v[4] == pytest.approx(0.83)
        assert v.sum() == pytest.approx(1.0, abs=1e-12)

    def test_b21_eight_steps_ready_entry(self, evals_matrices):
        v = conditional_state_distribution(evals_matrices["B21"], START_INDEX, 8)
        assert v[8] == pytest.approx(0.1038, abs=1e-4)

    def test_matches_matrix_power_oracle(self, evals_matrices):
        matrix = evals_matrices["B12"]
        for elapsed in (1, 3, 7, 20):
            expected = oracles.matrix_power_distribution(matrix.entries, START_INDEX, elapsed)
            got = conditional_state_distribution(matrix, START_INDEX, elapsed)
            assert got == pytest.approx(expected, abs=1e-12)

    def test_negative_elapsed_rejected(self, evals_matrices):
        with pytest.raises(ValueError):
            conditional_state_distribution(evals_matrices["B20"], 0, -1)


class TestSimulate:
    def test_fixed_seed_reproducible(self, evals_matrices):
        a = simulate(evals_matrices["B21"], 500, seed=42)
        b = simulate(evals_matrices["B21"], 500, seed=42)
        assert np.array_equal(a.states, b.states)

    def test_different_seeds_differ(self, evals_matrices):
        a = simulate(evals_matrices["B21"], 500, seed=1)
        b = simulate(evals_matrices["B21"], 500, seed=2)
        assert not np.array_equal(a.states, b.states)

    def test_deterministic_forward_chain_path(self):
        matrix = synthetic_chain([0.0] * 5)
        trajectory = simulate(matrix, 8, seed=7)
        assert trajectory.states.tolist() == [0, 1, 2, 3, 4, 4, 4, 4, 4]

    def test_every_transition_has_positive_probability(self, evals_matrices):
        matrix = evals_matrices["B22"]
        trajectory = simulate(matrix, 2000, seed=11)
        pairs = zip(trajectory.states[:-1], trajectory.states[1:])
        assert all(matrix.entries[a, b] > 0 for a, b in pairs)

    def test_occupancy_approaches_steady_state(self, evals_matrices):
        matrix = evals_matrices["B21"]
        trajectory = simulate(matrix, 200_000, seed=3)
        empirical = occupancy_fractions(trajectory, matrix.n_states)
        analytic = steady_state(matrix).occupancy
        assert np.max(np.abs(empirical - analytic)) < 0.01

    def test_nonpositive_steps_rejected(self, evals_matrices):
        with pytest.raises(ValueError):
            simulate(evals_matrices["B20"], 0, seed=1)


class TestEmpiricalFirstPassage:
    def test_deterministic_chain_hits_exactly_at_distance(self):
        matrix = synthetic_chain([0.0] * 5)
        series = empirical_first_passage(matrix, trials=200, horizon=20, seed=5)
        assert series.probabilities[3] == 1.0
        assert series.reach_probability == 1.0

    def test_fixed_seed_reproducible(self, evals_matrices):
        a = empirical_first_passage(evals_matrices["B20"], trials=500, horizon=100, seed=9)
        b = empirical_first_passage(evals_matrices["B20"], trials=500, horizon=100, seed=9)
        assert np.array_equal(a.probabilities, b.probabilities)

    def test_tracks_analytic_series(self, evals_matrices):
        matrix = evals_matrices["B20"]
        empirical = empirical_first_passage(matrix, trials=4000, horizon=100, seed=13)
        analytic = first_passage_distribution(matrix, START_INDEX, 8, horizon=100)
        assert np.max(np.abs(empirical.probabilities - analytic.probabilities)) < 0.03

    def test_invalid_arguments_rejected(self, evals_matrices):
        with pytest.raises(ValueError):
            empirical_first_passage(evals_matrices["B20"], trials=0, horizon=10, seed=1)
        with pytest.raises(ValueError):
            empirical_first_passage(evals_matrices["B20"], trials=10, horizon=0, seed=1)
