"""
Reset/step contract every environment implements
"""

from abc import ABC, abstractmethod
from typing import Any, Optional, Tuple

import numpy as np

from ..errors import EpisodeFinishedError
from .model import TabularModel
from .types import ActionSpec, Observation, StepOutcome

SEED_MODULUS = 2**64


class Environment(ABC):
    """
    Single-threaded state machine. Subclasses implement `_reset` and `_step`;
    the base class owns seeding, validation, the turn limit and the finished flag.
    """

    env_id: str = "environment"

    def __init__(
        self,
        action_spec: ActionSpec,
        observation_dim: int,
        turn_limit: Optional[int] = None,
        num_states: Optional[int] = None,
    ):
        self.action_spec = action_spec
        self.observation_dim = observation_dim
        self.turn_limit = turn_limit
        self.num_states = num_states
        self._rng: Optional[np.random.Generator] = None
        self._finished = True
        self._elapsed = 0

    @property
    def is_tabular(self) -> bool:
        return self.num_states is not None

    @property
    def rng(self) -> np.random.Generator:
        if self._rng is None:
            raise EpisodeFinishedError("Environment must be reset before use")
        return self._rng

    @property
    def elapsed_steps(self) -> int:
        return self._elapsed

    def reset(self, seed: int) -> Observation:
        self._rng = np.random.default_rng(int(seed) % SEED_MODULUS)
        self._elapsed = 0
        self._finished = False
        return self._reset()

    def step(self, action: Any) -> StepOutcome:
        if self._finished:
            raise EpisodeFinishedError(
                f"{self.env_id}: episode already finished, call reset first"
            )
        action = self.action_spec.validate(action)
        next_observation, reward, terminal = self._step(action)
        self._elapsed += 1
        truncated = (
            not terminal
            and self.turn_limit is not None
            and self._elapsed >= self.turn_limit
        )
        self._finished = terminal or truncated
        return StepOutcome(
            reward=float(reward),
            next_observation=next_observation,
            terminal=bool(terminal),
            truncated=bool(truncated),
        )

    def transition_model(self) -> TabularModel:
        raise NotImplementedError(f"{self.env_id} has no explicit transition model")

    @abstractmethod
    def _reset(self) -> Observation:
        ...

    @abstractmethod
    def _step(self, action: Any) -> Tuple[Observation, float, bool]:
        ...
