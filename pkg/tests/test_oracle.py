import csv

import numpy as np
import pytest

from sibre.environments import CartPole, ChainMDP
from sibre.errors import UnsupportedEnvironmentError
from sibre.oracle import (
    ABOVE,
    AT,
    BELOW,
    bellman_backup,
    bernoulli_return_sampler,
    classify_case,
    constant_return_sampler,
    episodic_rho_star,
    evaluate_policy,
    greedy_actions,
    monte_carlo_policy_value,
    policy_equivalence_check,
    reachable_under,
    value_iteration,
    verify_threshold_dynamics,
)
from sibre.shaper import BetaSchedule, ThresholdState, record_return_and_maybe_update


class TestValueIteration:
    def test_chain_optimum(self):
        assert value_iteration(ChainMDP(), gamma=1.0).rho_star == pytest.approx(1.0)
        solution = value_iteration(ChainMDP(length=4), gamma=0.9)
        assert solution.rho_star == pytest.approx(0.81)
        np.testing.assert_array_equal(solution.optimal_policy[:3], [1, 1, 1])

    def test_zero_discount_is_best_immediate_reward(self, frozen_lake):
        model = frozen_lake.transition_model()
        solution = value_iteration(model, gamma=0.0)
        np.testing.assert_allclose(solution.optimal_values, model.expected_rewards().max(axis=1))
        assert solution.optimal_values[14] == pytest.approx(1 / 3)

    def test_bellman_fixed_point(self, frozen_lake):
        model = frozen_lake.transition_model()
        solution = value_iteration(model, gamma=0.99)
        backed_up = bellman_backup(model, solution.optimal_values, 0.99).max(axis=1)
        np.testing.assert_allclose(backed_up, solution.optimal_values, atol=1e-8)
        assert np.all(solution.optimal_values[list(model.terminal_states)] == 0.0)
        assert 0.5 < solution.rho_star < 0.6

    def test_rejects_non_tabular(self):
        with pytest.raises(UnsupportedEnvironmentError):
            value_iteration(CartPole())

    def test_rejects_bad_gamma(self, frozen_lake):
        with pytest.raises(ValueError):
            value_iteration(frozen_lake, gamma=1.5)

    def test_greedy_ties(self):
        q = np.array([[1.0, 1.0 + 1e-14, 0.5], [0.0, 2.0, 2.0]])
        np.testing.assert_array_equal(greedy_actions(q), [0, 1])


class TestPolicyEvaluation:
    def test_monte_carlo_agrees_with_exact(self, frozen_lake, rng):
        solution = value_iteration(frozen_lake, gamma=0.99)
        exact = evaluate_policy(frozen_lake, solution.optimal_policy, gamma=0.99)
        np.testing.assert_allclose(exact, solution.optimal_values, atol=1e-8)
        estimate = monte_carlo_policy_value(
            frozen_lake, solution.optimal_policy, 20_000, rng, gamma=0.99
        )
        assert estimate.within(exact[frozen_lake.start_state], num_sigma=4.0)

    def test_unbounded_policy_needs_horizon(self):
        left = np.zeros(2, dtype=int)
        with pytest.raises(ValueError):
            evaluate_policy(ChainMDP(), left, gamma=1.0)
        assert evaluate_policy(ChainMDP(), left, gamma=1.0, horizon=10)[0] == 0.0

    def test_episodic_rho_star(self, frozen_lake):
        solution = value_iteration(frozen_lake, gamma=0.99)
        short = episodic_rho_star(frozen_lake, horizon=10)
        long = episodic_rho_star(frozen_lake, horizon=100)
        assert 0.0 < short < long <= 1.0
        assert long >= solution.rho_star


class TestPolicyCheck:
    def test_optimal_policy_passes(self, frozen_lake):
        solution = value_iteration(frozen_lake, gamma=0.99)
        report = policy_equivalence_check(
            frozen_lake, solution.optimal_policy, solution, method="exact"
        )
        assert report.value_gap == pytest.approx(0.0, abs=1e-9)
        assert report.agreement == 1.0 and not report.flagged

    def test_monte_carlo_method(self, frozen_lake, rng):
        solution = value_iteration(frozen_lake, gamma=0.99)
        report = policy_equivalence_check(
            frozen_lake, solution.optimal_policy, solution, num_episodes=20_000, rng=rng
        )
        assert report.within_tolerance and report.stderr > 0.0

    def test_poor_policy_is_flagged(self, frozen_lake):
        solution = value_iteration(frozen_lake, gamma=0.99)
        always_left = np.zeros(16, dtype=int)
        report = policy_equivalence_check(frozen_lake, always_left, solution, method="exact")
        assert report.flagged
        assert report.learned_value == pytest.approx(0.0)
        assert report.agreement < 1.0 and report.disagreeing_states

    def test_reachable_states_exclude_terminals(self, frozen_lake):
        model = frozen_lake.transition_model()
        solution = value_iteration(model, gamma=0.99)
        reachable = reachable_under(model, solution.optimal_policy)
        assert model.start_state in reachable
        assert not set(reachable) & model.terminal_states

    def test_unknown_method(self, frozen_lake):
        solution = value_iteration(frozen_lake, gamma=0.99)
        with pytest.raises(ValueError):
            policy_equivalence_check(frozen_lake, solution.optimal_policy, solution, method="sampled")


class TestThresholdDynamics:
    def test_classify(self):
        assert classify_case(0.0, 0.7) == BELOW
        assert classify_case(1.0, 0.7) == ABOVE
        assert classify_case(0.7, 0.7) == AT

    def test_rises_towards_optimum(self, rng):
        report = verify_threshold_dynamics(
            bernoulli_return_sampler(0.7), 0.0, 0.05, 50, 10_000, 0.7, rng
        )
        assert report.case == BELOW and report.passed
        assert report.mean_rho[-1] == pytest.approx(0.7 * (1 - 0.95**50), abs=0.01)

    def test_falls_towards_optimum(self, rng):
        report = verify_threshold_dynamics(
            bernoulli_return_sampler(0.7), 1.0, 0.02, 50, 10_000, 0.7, rng
        )
        assert report.case == ABOVE and report.passed

    def test_stationary_at_optimum(self, rng):
        report = verify_threshold_dynamics(constant_return_sampler(0.7), 0.7, 0.1, 20, 10, 0.7, rng)
        assert report.case == AT and report.degenerate and report.passed
        np.testing.assert_allclose(report.mean_rho, 0.7)

    def test_wrong_optimum_fails(self, rng):
        report = verify_threshold_dynamics(constant_return_sampler(0.5), 0.0, 0.1, 30, 10, 0.4, rng)
        assert not report.verdicts["below_rho_star"]
        assert report.verdicts["increasing"]

    def test_matches_threshold_update(self, rng):
        report = verify_threshold_dynamics(
            constant_return_sampler(3.7), 0.0, 0.1, 25, 4, 3.7, rng, episodes_per_update=3
        )
        state = ThresholdState.create(BetaSchedule.constant(0.1), update_period=3)
        expected = [state.rho]
        for _ in range(25):
            for _ in range(3):
                state = record_return_and_maybe_update(state, 3.7)
            expected.append(state.rho)
        np.testing.assert_allclose(report.mean_rho, expected, atol=1e-12)

    def test_csv(self, rng, tmp_path):
        report = verify_threshold_dynamics(bernoulli_return_sampler(0.5), 0.0, 0.1, 5, 50, 0.5, rng)
        path = report.write_csv(tmp_path / "theorem" / "dynamics_case1.csv")
        with path.open() as handle:
            rows = list(csv.DictReader(handle))
        assert list(rows[0]) == ["update_index", "mean_rho", "ci_low", "ci_high"]
        assert len(rows) == report.num_updates + 1 == 6
        assert all(float(r["ci_low"]) <= float(r["mean_rho"]) <= float(r["ci_high"]) for r in rows)

    @pytest.mark.parametrize("kwargs", [{"num_trials": 1}, {"beta": 0.0}, {"beta": 1.0}])
    def test_invalid_arguments(self, rng, kwargs):
        args = dict(
            return_sampler=constant_return_sampler(1.0),
            rho0=0.0,
            beta=0.1,
            num_updates=5,
            num_trials=10,
            rho_star=1.0,
            rng=rng,
        )
        args.update(kwargs)
        with pytest.raises(ValueError):
            verify_threshold_dynamics(**args)
