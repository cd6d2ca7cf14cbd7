"""
Full-size experiment checks; run with `pytest --runslow`.
"""

import numpy as np
import pytest
from scipy import stats

from sibre.agents import AgentConfig, a2c_loss, a2c_loss_and_gradients, train_tabular_q
from sibre.environments import FrozenLake
from sibre.harness import expand_config, run_experiment, run_transfer, trailing_mean
from sibre.harness.curves import compare_arms, final_returns
from sibre.oracle import (
    bernoulli_return_sampler,
    episodic_rho_star,
    monte_carlo_policy_value,
    policy_equivalence_check,
    value_iteration,
    verify_threshold_dynamics,
)
from sibre.shaper import BetaSchedule, ThresholdState
from sibre.tinynet import DenseNet, backward, forward, max_relative_error, numerical_gradients

pytestmark = pytest.mark.slow


def final_window_means(result, window=1000):
    return np.array([run.returns[-window:].mean() for run in result.runs])


@pytest.mark.parametrize("rho0,label", [(0.0, "below"), (1.0, "above"), (None, "at")])
def test_threshold_dynamics_on_frozen_lake(rho0, label):
    rho_star = episodic_rho_star(FrozenLake(), horizon=100)
    report = verify_threshold_dynamics(
        bernoulli_return_sampler(rho_star),
        rho_star if rho0 is None else rho0,
        0.02,
        50,
        10_000,
        rho_star,
        np.random.default_rng(7),
    )
    assert report.passed, (label, report.verdicts)


def test_value_iteration_matches_million_rollouts():
    env = FrozenLake()
    solution = value_iteration(env, gamma=0.99)
    estimate = monte_carlo_policy_value(
        env, solution.optimal_policy, 1_000_000, np.random.default_rng(11), gamma=0.99
    )
    assert estimate.within(solution.rho_star, num_sigma=3.0)


def test_shaping_preserves_the_optimal_policy():
    env = FrozenLake()
    config = AgentConfig(
        learning_rate=0.1,
        gamma=0.99,
        epsilon_decay=0.9,
        epsilon_decay_every=100,
        epsilon_min=0.01,
        epsilon_decay_unit="episodes",
        budget=10_000,
    )
    shaper = ThresholdState.create(BetaSchedule.linear_staircase(0.001, 0.1, 10))
    seeds = tuple(range(10))
    shaped = train_tabular_q(env, config, shaper, seeds)
    sibre = final_window_means(shaped).mean()
    baseline = final_window_means(train_tabular_q(env, config, None, seeds)).mean()
    rho_star = episodic_rho_star(env, horizon=100)
    assert sibre >= 0.9 * rho_star
    assert abs(sibre - baseline) <= 0.03 * baseline

    oracle = value_iteration(env, gamma=0.99)
    gaps = [
        policy_equivalence_check(env, run.qtable.greedy_policy(), oracle, method="exact").value_gap
        for run in shaped.runs
    ]
    assert np.median(gaps) <= 0.1


def test_transfer_carries_threshold(tmp_path, settings):
    config = expand_config(
        {
            "preset": "transfer_doorkey",
            "seeds": [0, 1],
            "agent": {"config": {"budget": 3000}},
            "transfer": {"budget": 1000},
        }
    )
    outcome = run_transfer(config, tmp_path, settings)
    for first, second in zip(outcome.stage1.results["sibre"].runs, outcome.stage2.results["sibre"].runs):
        assert second.start_rho == first.threshold.rho
        assert second.points[0].index == len(first.points)
    for run in outcome.stage2.results["baseline"].runs:
        assert run.start_rho is None and run.threshold is None


def test_gradient_suite_over_random_nets():
    rng = np.random.default_rng(2024)
    heads = ["linear", "softmax", "gaussian"]
    for trial in range(100):
        head = heads[trial % 3]
        dims = [int(rng.integers(2, 5)) for _ in range(int(rng.integers(2, 4)))] + [int(rng.integers(2, 4))]
        net = DenseNet.create(dims, rng, head=head, initial_log_std=float(rng.uniform(-1.0, 0.5)))
        x = rng.normal(size=(int(rng.integers(1, 5)), dims[0]))
        upstream = rng.normal(size=(x.shape[0], net.output_dim))
        numeric = numerical_gradients(net, lambda n: float(np.sum(upstream * forward(n, x))))
        assert max_relative_error(backward(net, x, upstream), numeric) <= 1e-4, (trial, head, dims)

    policy = DenseNet.create([4, 6, 3], rng, head="softmax")
    value = DenseNet.create([4, 6, 1], rng)
    obs = rng.normal(size=(1, 4))
    actions, targets, advantages = np.array([2]), np.array([0.7]), np.array([0.3])
    _, policy_grads, _ = a2c_loss_and_gradients(policy, value, obs, actions, targets, 0.01, 0.5, advantages)
    numeric = numerical_gradients(
        policy, lambda p: a2c_loss(p, value, obs, actions, targets, 0.01, 0.5, advantages).total
    )
    assert max_relative_error(policy_grads, numeric) <= 1e-4


def worse_pvalue(treatment, control):
    """One-sided Welch p-value for the control arm beating the treatment arm."""
    return stats.ttest_ind(control, treatment, equal_var=False, alternative="greater").pvalue


def test_shaping_helps_at_a_small_learning_rate():
    env = FrozenLake()
    config = AgentConfig(
        learning_rate=0.003,
        gamma=0.99,
        epsilon_decay=0.9,
        epsilon_decay_every=100,
        epsilon_min=0.01,
        epsilon_decay_unit="episodes",
        budget=10_000,
    )
    shaper = ThresholdState.create(BetaSchedule.linear_staircase(0.001, 0.1, 10))
    seeds = tuple(range(10))
    shaped = train_tabular_q(env, config, shaper, seeds)
    baseline = train_tabular_q(env, config, None, seeds)
    difference, pvalue = compare_arms(shaped, baseline, final_window=1000)
    assert difference > 0
    assert pvalue is not None and pvalue < 0.05


def test_doorkey_area_under_curve(tmp_path, settings):
    config = expand_config({"preset": "doorkey6"})
    assert config.agent_config.budget == 200_000 and len(config.seeds) == 5
    outcome = run_experiment(config, tmp_path, settings)
    # mean return over the whole curve, per seed
    areas = {
        arm: np.array([run.returns.mean() for run in outcome.results[arm].runs])
        for arm in ("sibre", "baseline")
    }
    assert areas["sibre"].mean() > areas["baseline"].mean()
    pvalue = stats.ttest_ind(areas["sibre"], areas["baseline"], equal_var=False, alternative="greater").pvalue
    assert pvalue < 0.05


def test_continuing_cartpole_threshold_settles(tmp_path, settings):
    config = expand_config({"preset": "cartpole_cont"})
    assert config.shaper.update_period == 500 and config.agent_config.budget == 100_000
    outcome = run_experiment(config, tmp_path, settings)
    sibre, baseline = outcome.results["sibre"], outcome.results["baseline"]

    window = max(1, len(sibre.runs[0].points) // 5)
    assert worse_pvalue(final_returns(sibre, window), final_returns(baseline, window)) >= 0.05

    for run in sibre.runs:
        smoothed = trailing_mean(run.rho_trace, config.smoothing_window)
        tail = smoothed[-max(1, len(smoothed) // 5):]
        final = smoothed[-1]
        assert np.all(np.abs(tail - final) <= 0.1 * abs(final)), run.seed


@pytest.mark.parametrize("rho0,label", [(0.0, "below"), (1.0, "above"), (None, "at")])
def test_threshold_verdicts_agree_across_meta_seeds(rho0, label):
    rho_star = episodic_rho_star(FrozenLake(), horizon=100)
    verdicts = [
        verify_threshold_dynamics(
            bernoulli_return_sampler(rho_star),
            rho_star if rho0 is None else rho0,
            0.02,
            50,
            10_000,
            rho_star,
            np.random.default_rng(meta_seed),
            confidence=0.999,
        ).verdicts
        for meta_seed in range(5)
    ]
    assert all(v == verdicts[0] for v in verdicts), label
    assert all(verdicts[0].values()), label
