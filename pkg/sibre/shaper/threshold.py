"""
Threshold state, terminal reward replacement and the threshold update
"""

import math
from dataclasses import dataclass, replace
from typing import Iterable, Tuple

from ..mdp import StepOutcome, discounted_sum
from .schedule import BetaSchedule, current_beta

EPISODIC, CONTINUING = "episodic", "continuing"


@dataclass(frozen=True)
class ThresholdMode:
    kind: str = EPISODIC
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in (EPISODIC, CONTINUING):
            raise ValueError(f"Unknown threshold mode {self.kind!r}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("Threshold gamma must lie in (0, 1]")

    @classmethod
    def continuing(cls, gamma: float) -> "ThresholdMode":
        return cls(kind=CONTINUING, gamma=gamma)

    @property
    def is_continuing(self) -> bool:
        return self.kind == CONTINUING


@dataclass(frozen=True)
class ThresholdState:
    """
    update_period counts episodes in episodic mode and steps per window in
    continuing mode, where every window return triggers an update.
    """

    rho: float = 0.0
    update_period: int = 1
    pending_returns: Tuple[float, ...] = ()
    episodes_seen: int = 0
    updates_applied: int = 0
    schedule: BetaSchedule = BetaSchedule.constant(0.1)
    mode: ThresholdMode = ThresholdMode()
    beta: float = 0.0

    def __post_init__(self):
        if self.update_period < 1:
            raise ValueError("update_period must be at least 1")
        if not math.isfinite(self.rho):
            raise ValueError("rho must be finite")

    @classmethod
    def create(
        cls,
        schedule: BetaSchedule,
        update_period: int = 1,
        rho0: float = 0.0,
        mode: ThresholdMode = ThresholdMode(),
    ) -> "ThresholdState":
        return cls(
            rho=rho0,
            update_period=update_period,
            schedule=schedule,
            mode=mode,
            beta=current_beta(schedule, 0.0),
        )

    @property
    def returns_per_update(self) -> int:
        return 1 if self.mode.is_continuing else self.update_period


@dataclass(frozen=True)
class ShapedReward:
    value: float
    was_terminal_replacement: bool


def shape_step(
    threshold_state: ThresholdState, outcome: StepOutcome, return_so_far: float
) -> ShapedReward:
    """
    Terminal (or truncated) steps pay G - rho; every other step keeps its reward.
    """
    if outcome.terminal or outcome.truncated:
        return ShapedReward(
            value=return_so_far - threshold_state.rho, was_terminal_replacement=True
        )
    return ShapedReward(value=outcome.reward, was_terminal_replacement=False)


def record_return_and_maybe_update(
    threshold_state: ThresholdState, value: float, training_fraction: float = 0.0
) -> ThresholdState:
    pending = threshold_state.pending_returns + (float(value),)
    seen = threshold_state.episodes_seen + 1
    if len(pending) < threshold_state.returns_per_update:
        return replace(threshold_state, pending_returns=pending, episodes_seen=seen)

    beta = current_beta(threshold_state.schedule, training_fraction)
    batch_mean = math.fsum(pending) / len(pending)
    return replace(
        threshold_state,
        rho=threshold_state.rho + beta * (batch_mean - threshold_state.rho),
        pending_returns=(),
        episodes_seen=seen,
        updates_applied=threshold_state.updates_applied + 1,
        beta=beta,
    )


def continuing_window_return(rewards: Iterable[float], gamma: float) -> float:
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    return discounted_sum(rewards, gamma)
