"""
Agent hyper-parameters, exploration schedule and training budget
"""

from dataclasses import asdict, dataclass, fields
from typing import Tuple

from ..errors import ConfigError

EPISODES, FRAMES = "episodes", "frames"
STEPS = "steps"


@dataclass(frozen=True)
class EpsilonSchedule:
    """
    Multiplicative decay by `decay` every `every` environment steps, or every
    `every` finished episodes when `unit` is "episodes"; floored at `floor`.
    """

    start: float = 1.0
    decay: float = 0.9
    every: int = 100
    floor: float = 0.01
    unit: str = STEPS

    def value_after(self, count: int) -> float:
        return max(self.floor, self.start * self.decay ** (count // self.every))

    def value_at(self, frames: int, episodes: int) -> float:
        return self.value_after(episodes if self.unit == EPISODES else frames)


@dataclass(frozen=True)
class Budget:
    kind: str
    amount: int

    def exhausted(self, episodes: int, frames: int) -> bool:
        return (episodes if self.kind == EPISODES else frames) >= self.amount

    def fraction(self, episodes: int, frames: int) -> float:
        if self.amount <= 0:
            return 1.0
        done = episodes if self.kind == EPISODES else frames
        return min(done / self.amount, 1.0)


@dataclass(frozen=True)
class AgentConfig:
    learning_rate: float = 0.1
    gamma: float = 0.99
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.9
    epsilon_decay_every: int = 100
    epsilon_min: float = 0.01
    epsilon_decay_unit: str = STEPS
    entropy_coefficient: float = 0.01
    value_coefficient: float = 0.5
    batch_size: int = 32
    target_update_period: int = 1000
    replay_capacity: int = 100_000
    learning_starts: int = 1000
    train_every: int = 1
    rollout_length: int = 5
    hidden_dims: Tuple[int, ...] = (64, 64)
    activation: str = "tanh"
    optimizer: str = "adam"
    max_grad_norm: float = 0.5
    budget_kind: str = EPISODES
    budget: int = 10_000
    report_window: int = 500
    log_every: int = 1000

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("gamma must lie in (0, 1]")
        for name in ("epsilon_start", "epsilon_min"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if not 0.0 < self.epsilon_decay <= 1.0:
            raise ConfigError("epsilon_decay must lie in (0, 1]")
        if self.epsilon_decay_unit not in (STEPS, EPISODES):
            raise ConfigError(f"epsilon_decay_unit must be {STEPS!r} or {EPISODES!r}")
        if self.budget_kind not in (EPISODES, FRAMES):
            raise ConfigError(f"budget_kind must be {EPISODES!r} or {FRAMES!r}")
        if self.budget < 0:
            raise ConfigError("budget cannot be negative")
        for name in (
            "epsilon_decay_every",
            "batch_size",
            "target_update_period",
            "replay_capacity",
            "train_every",
            "rollout_length",
            "report_window",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.entropy_coefficient < 0 or self.value_coefficient < 0:
            raise ConfigError("Loss coefficients cannot be negative")

    @property
    def epsilon_schedule(self) -> EpsilonSchedule:
        return EpsilonSchedule(
            start=self.epsilon_start,
            decay=self.epsilon_decay,
            every=self.epsilon_decay_every,
            floor=self.epsilon_min,
            unit=self.epsilon_decay_unit,
        )

    @property
    def training_budget(self) -> Budget:
        return Budget(kind=self.budget_kind, amount=self.budget)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["hidden_dims"] = list(self.hidden_dims)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "AgentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown agent settings: {sorted(unknown)}")
        values = dict(data)
        if "hidden_dims" in values:
            values["hidden_dims"] = tuple(int(d) for d in values["hidden_dims"])
        return cls(**values)
