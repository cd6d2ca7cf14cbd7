"""
Fixed-capacity ring buffer of transitions with uniform sampling
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class ReplayBatch:
    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    terminals: np.ndarray

    def __len__(self) -> int:
        return len(self.actions)


@dataclass
class ReplayBuffer:
    """Once full, each add overwrites the oldest transition."""

    capacity: int
    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    terminals: np.ndarray
    size: int = 0
    cursor: int = 0

    @classmethod
    def create(cls, capacity: int, observation_dim: int) -> "ReplayBuffer":
        if capacity < 1:
            raise ValueError("Replay capacity must be at least 1")
        return cls(
            capacity=capacity,
            observations=np.zeros((capacity, observation_dim)),
            actions=np.zeros(capacity, dtype=np.int64),
            rewards=np.zeros(capacity),
            next_observations=np.zeros((capacity, observation_dim)),
            terminals=np.zeros(capacity, dtype=bool),
        )

    def __len__(self) -> int:
        return self.size

    def add(
        self,
        observation: np.ndarray,
        action: int,
        reward: float,
        next_observation: np.ndarray,
        terminal: bool,
    ) -> None:
        i = self.cursor
        self.observations[i] = observation
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_observations[i] = next_observation
        self.terminals[i] = terminal
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> ReplayBatch:
        if self.size == 0:
            raise ValueError("Cannot sample from an empty replay buffer")
        idx = rng.integers(self.size, size=batch_size)
        return ReplayBatch(
            observations=self.observations[idx],
            actions=self.actions[idx],
            rewards=self.rewards[idx],
            next_observations=self.next_observations[idx],
            terminals=self.terminals[idx],
        )
