"""
Vectorized Monte-Carlo evaluation of a deterministic tabular policy
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..mdp import Environment, TabularModel
from .value_iteration import as_model


@dataclass
class MonteCarloEstimate:
    mean: float
    stderr: float
    num_episodes: int

    def within(self, target: float, num_sigma: float = 3.0) -> bool:
        return abs(self.mean - target) <= num_sigma * self.stderr


def _policy_kernels(model: TabularModel, policy: np.ndarray):
    """Per-state next-state distribution, arrival reward and arrival-terminal flag under pi."""
    size = model.num_states
    probs = np.zeros((size, size))
    reward_mass = np.zeros((size, size))
    done = np.zeros((size, size), dtype=bool)
    for s in range(size):
        for p, s_next, r, terminal in model.transitions[s][policy[s]]:
            probs[s, s_next] += p
            reward_mass[s, s_next] += p * r
            done[s, s_next] |= terminal
    rewards = np.divide(reward_mass, probs, out=np.zeros_like(probs), where=probs > 0)
    return np.cumsum(probs, axis=1), rewards, done


def monte_carlo_policy_value(
    model_or_env: Union[TabularModel, Environment],
    policy: np.ndarray,
    num_episodes: int,
    rng: np.random.Generator,
    gamma: float = 1.0,
    horizon: int = 1000,
) -> MonteCarloEstimate:
    """All episodes advance in lockstep from the start state until termination or `horizon`."""
    model = as_model(model_or_env)
    policy = np.asarray(policy, dtype=int)
    cdf, rewards, done = _policy_kernels(model, policy)

    states = np.full(num_episodes, model.start_state)
    returns = np.zeros(num_episodes)
    alive = np.ones(num_episodes, dtype=bool)
    for t in range(horizon):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        current = states[idx]
        draws = rng.random(idx.size)
        nxt = np.minimum((draws[:, None] >= cdf[current]).sum(axis=1), model.num_states - 1)
        returns[idx] += gamma**t * rewards[current, nxt]
        states[idx] = nxt
        alive[idx] = ~done[current, nxt]

    stderr = float(np.std(returns, ddof=1) / np.sqrt(num_episodes)) if num_episodes > 1 else 0.0
    return MonteCarloEstimate(mean=float(np.mean(returns)), stderr=stderr, num_episodes=num_episodes)
