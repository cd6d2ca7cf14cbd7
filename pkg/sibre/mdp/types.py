"""
Value types shared by environments, agents and the shaper
"""

import math
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

import numpy as np

from ..errors import InvalidActionError


@dataclass(frozen=True, eq=False)
class Observation:
    encoding: np.ndarray
    discrete_index: Optional[int] = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Observation):
            return NotImplemented
        return self.discrete_index == other.discrete_index and np.array_equal(
            self.encoding, other.encoding
        )

    def __hash__(self) -> int:
        return hash((self.discrete_index, self.encoding.tobytes()))


@dataclass(frozen=True)
class ActionSpec:
    """
    Either `count` discrete actions or a box of `len(low)` real dimensions.
    """

    kind: str
    count: int = 0
    low: Tuple[float, ...] = ()
    high: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "discrete":
            if self.count < 2:
                raise ValueError("A discrete action space needs at least two actions")
        elif self.kind == "continuous":
            if len(self.low) == 0 or len(self.low) != len(self.high):
                raise ValueError("Continuous bounds must be non-empty and equal length")
            if any(lo >= hi for lo, hi in zip(self.low, self.high)):
                raise ValueError("Continuous bounds need low < high in every dimension")
        else:
            raise ValueError(f"Unknown action kind {self.kind!r}")

    @classmethod
    def discrete(cls, count: int) -> "ActionSpec":
        return cls(kind="discrete", count=count)

    @classmethod
    def continuous(cls, low, high) -> "ActionSpec":
        return cls(
            kind="continuous",
            low=tuple(float(v) for v in low),
            high=tuple(float(v) for v in high),
        )

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    @property
    def dim(self) -> int:
        return self.count if self.is_discrete else len(self.low)

    def validate(self, action: Any):
        """
        Return the action in canonical form (int or float vector) or raise InvalidActionError.
        """
        if self.is_discrete:
            if isinstance(action, (bool, np.bool_)) or not isinstance(
                action, (int, np.integer)
            ):
                raise InvalidActionError(f"Discrete action must be an integer, got {action!r}")
            if not 0 <= int(action) < self.count:
                raise InvalidActionError(
                    f"Action {action} outside discrete range [0, {self.count})"
                )
            return int(action)

        vector = np.asarray(action, dtype=np.float64).reshape(-1)
        if vector.shape[0] != len(self.low):
            raise InvalidActionError(
                f"Continuous action has {vector.shape[0]} dims, expected {len(self.low)}"
            )
        if not np.all(np.isfinite(vector)):
            raise InvalidActionError("Continuous action must be finite")
        if np.any(vector < np.asarray(self.low)) or np.any(vector > np.asarray(self.high)):
            raise InvalidActionError(
                f"Action {vector.tolist()} outside bounds {list(self.low)}..{list(self.high)}"
            )
        return vector


@dataclass(frozen=True)
class StepOutcome:
    reward: float
    next_observation: Observation
    terminal: bool
    truncated: bool = False

    def __post_init__(self):
        if self.terminal and self.truncated:
            raise ValueError("A step cannot be both terminal and truncated")
        if not math.isfinite(self.reward):
            raise ValueError(f"Reward must be finite, got {self.reward}")

    @property
    def ends_episode(self) -> bool:
        return self.terminal or self.truncated


@dataclass(frozen=True)
class TraceStep:
    observation: Observation
    action: Any
    reward: float
    terminal: bool


@dataclass
class EpisodeTrace:
    seed: int
    steps: List[TraceStep] = field(default_factory=list)
    truncated: bool = False

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def rewards(self) -> List[float]:
        return [s.reward for s in self.steps]

    @property
    def terminated(self) -> bool:
        return bool(self.steps) and self.steps[-1].terminal


@dataclass(frozen=True)
class ReturnValue:
    undiscounted: float
    discounted: float
    gamma: float
