"""
Per-run driver that feeds a training loop's step outcomes through the threshold
"""

import logging
from typing import List

from ..mdp import StepOutcome
from .threshold import (
    ShapedReward,
    ThresholdState,
    continuing_window_return,
    record_return_and_maybe_update,
    shape_step,
)

logger = logging.getLogger(__name__)


class SibreShaper:
    """
    Episodic mode replaces the reward of the step that ends an episode with
    G - rho, then records G. Continuing mode does the same at every window
    boundary with the discounted window return.
    """

    def __init__(self, state: ThresholdState):
        self.state = state
        self._episode_return = 0.0
        self._window: List[float] = []

    @property
    def rho(self) -> float:
        return self.state.rho

    @property
    def beta(self) -> float:
        return self.state.beta

    def shape(self, outcome: StepOutcome, training_fraction: float) -> ShapedReward:
        if self.state.mode.is_continuing:
            return self._shape_continuing(outcome, training_fraction)

        self._episode_return += outcome.reward
        shaped = shape_step(self.state, outcome, self._episode_return)
        if outcome.ends_episode:
            self.state = record_return_and_maybe_update(
                self.state, self._episode_return, training_fraction
            )
            self._episode_return = 0.0
        return shaped

    def _shape_continuing(self, outcome: StepOutcome, training_fraction: float) -> ShapedReward:
        self._window.append(outcome.reward)
        if len(self._window) < self.state.update_period:
            return ShapedReward(value=outcome.reward, was_terminal_replacement=False)

        window_return = continuing_window_return(self._window, self.state.mode.gamma)
        shaped = ShapedReward(
            value=window_return - self.state.rho, was_terminal_replacement=True
        )
        self.state = record_return_and_maybe_update(
            self.state, window_return, training_fraction
        )
        logger.debug(
            "window return %.4f, rho now %.4f (beta %.4f)",
            window_return,
            self.state.rho,
            self.state.beta,
        )
        self._window = []
        return shaped
