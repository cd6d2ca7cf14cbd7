import numpy as np
import pytest

from sibre.environments import ChainMDP, FrozenLake
from sibre.errors import EpisodeFinishedError, InvalidActionError
from sibre.mdp import (
    ActionSpec,
    Observation,
    StepOutcome,
    compute_return,
    discounted_sum,
    run_episode,
)


class TestActionSpec:
    def test_discrete_accepts_numpy_integers(self):
        assert ActionSpec.discrete(4).validate(np.int64(3)) == 3

    @pytest.mark.parametrize("action", [4, -1, 1.0, True, "1"])
    def test_discrete_rejects(self, action):
        with pytest.raises(InvalidActionError):
            ActionSpec.discrete(4).validate(action)

    def test_continuous_bounds(self):
        spec = ActionSpec.continuous([-1.0], [1.0])
        np.testing.assert_array_equal(spec.validate(0.5), [0.5])
        with pytest.raises(InvalidActionError):
            spec.validate([1.5])
        with pytest.raises(InvalidActionError):
            spec.validate([np.nan])
        with pytest.raises(InvalidActionError):
            spec.validate([0.1, 0.2])

    def test_dims(self):
        assert ActionSpec.discrete(5).dim == 5
        assert ActionSpec.continuous([-1, -1], [1, 1]).dim == 2


class TestStepOutcome:
    def test_terminal_and_truncated_is_invalid(self):
        obs = Observation(encoding=np.zeros(1))
        with pytest.raises(ValueError):
            StepOutcome(reward=0.0, next_observation=obs, terminal=True, truncated=True)

    def test_non_finite_reward_rejected(self):
        obs = Observation(encoding=np.zeros(1))
        with pytest.raises(ValueError):
            StepOutcome(reward=float("inf"), next_observation=obs, terminal=False)

    def test_observation_equality_uses_values(self):
        a = Observation(encoding=np.array([1.0, 0.0]), discrete_index=0)
        b = Observation(encoding=np.array([1.0, 0.0]), discrete_index=0)
        assert a == b
        assert hash(a) == hash(b)


class TestEnvironmentContract:
    def test_step_before_reset_fails(self):
        with pytest.raises(EpisodeFinishedError):
            ChainMDP().step(1)

    def test_step_after_terminal_fails(self):
        env = ChainMDP(length=2)
        env.reset(0)
        assert env.step(1).terminal
        with pytest.raises(EpisodeFinishedError):
            env.step(1)

    def test_turn_limit_truncates(self):
        env = ChainMDP(length=3, turn_limit=4)
        env.reset(0)
        outcomes = [env.step(0) for _ in range(4)]
        assert not any(o.terminal for o in outcomes)
        assert [o.truncated for o in outcomes] == [False, False, False, True]

    def test_same_seed_same_trajectory(self):
        env = FrozenLake()
        first = run_episode(env, lambda obs: 2, max_steps=100, seed=123)
        second = run_episode(env, lambda obs: 2, max_steps=100, seed=123)
        assert first.rewards == second.rewards
        assert [s.observation for s in first.steps] == [s.observation for s in second.steps]


class TestRunEpisode:
    def test_terminates_on_goal(self):
        trace = run_episode(ChainMDP(length=3), lambda obs: 1, max_steps=10, seed=0)
        assert trace.length == 2
        assert trace.terminated
        assert not trace.truncated
        assert trace.rewards == [0.0, 1.0]

    def test_max_steps_truncates(self):
        trace = run_episode(ChainMDP(length=3), lambda obs: 0, max_steps=5, seed=0)
        assert trace.length == 5
        assert trace.truncated

    def test_max_steps_must_be_positive(self):
        with pytest.raises(ValueError):
            run_episode(ChainMDP(), lambda obs: 1, max_steps=0, seed=0)


class TestReturns:
    def test_discounted_sum(self):
        assert discounted_sum([1.0, 1.0, 1.0], 0.5) == pytest.approx(1.75)

    def test_compute_return_from_rewards(self):
        value = compute_return([0.0, 0.0, 1.0], gamma=0.9)
        assert value.undiscounted == 1.0
        assert value.discounted == pytest.approx(0.81)

    def test_undiscounted_equals_discounted_at_one(self):
        value = compute_return([0.5, -0.25, 2.0])
        assert value.discounted == value.undiscounted == 2.25

    @pytest.mark.parametrize("gamma", [0.0, 1.5])
    def test_gamma_range(self, gamma):
        with pytest.raises(ValueError):
            compute_return([1.0], gamma)
