"""
Seeding and shaper plumbing shared by the training loops
"""

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np

from ..shaper import SibreShaper, ThresholdState
from .results import AgentCheckpoint


def seed_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Split one run seed into independent environment and agent generators."""
    env_seq, agent_seq = np.random.SeedSequence(int(seed) % 2**64).spawn(2)
    return np.random.default_rng(env_seq), np.random.default_rng(agent_seq)


def next_episode_seed(env_rng: np.random.Generator) -> int:
    return int(env_rng.integers(2**63))


def make_driver(
    shaper: Optional[ThresholdState], resume: Optional[AgentCheckpoint] = None
) -> Optional[SibreShaper]:
    if shaper is None:
        return None
    if resume is not None and resume.threshold is not None:
        shaper = replace(shaper, rho=resume.threshold.rho, beta=resume.threshold.beta)
    return SibreShaper(shaper)


def sample_categorical(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    cumulative = np.cumsum(probabilities)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(index, len(probabilities) - 1)


def explore_or_exploit(values: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """Uniform action with probability epsilon, else argmax with lowest-index ties."""
    if rng.random() < epsilon:
        return int(rng.integers(len(values)))
    return int(np.argmax(values))
