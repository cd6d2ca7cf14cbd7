"""
Episode execution and return computation
"""

from typing import Any, Callable, Iterable, Union

from .env import Environment
from .types import EpisodeTrace, Observation, ReturnValue, StepOutcome, TraceStep

Policy = Callable[[Observation], Any]


def reset(env: Environment, seed: int) -> Observation:
    return env.reset(seed)


def step(env: Environment, action: Any) -> StepOutcome:
    return env.step(action)


def run_episode(
    env: Environment, policy: Policy, max_steps: int, seed: int
) -> EpisodeTrace:
    """
    Roll `policy` from a freshly seeded reset. The trace is truncated when either
    the environment's turn limit or `max_steps` is reached first.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")

    observation = env.reset(seed)
    trace = EpisodeTrace(seed=seed)
    for _ in range(max_steps):
        action = policy(observation)
        outcome = env.step(action)
        trace.steps.append(
            TraceStep(
                observation=observation,
                action=action,
                reward=outcome.reward,
                terminal=outcome.terminal,
            )
        )
        observation = outcome.next_observation
        if outcome.terminal:
            return trace
        if outcome.truncated:
            trace.truncated = True
            return trace
    trace.truncated = True
    return trace


def discounted_sum(rewards: Iterable[float], gamma: float) -> float:
    total = 0.0
    discount = 1.0
    for reward in rewards:
        total += discount * reward
        discount *= gamma
    return total


def compute_return(
    trace: Union[EpisodeTrace, Iterable[float]], gamma: float = 1.0
) -> ReturnValue:
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    rewards = trace.rewards if isinstance(trace, EpisodeTrace) else list(trace)
    undiscounted = 0.0
    for reward in rewards:
        undiscounted += reward
    discounted = undiscounted if gamma == 1.0 else discounted_sum(rewards, gamma)
    return ReturnValue(undiscounted=undiscounted, discounted=discounted, gamma=gamma)
