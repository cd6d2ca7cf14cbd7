"""
Continuous mountain car with a goal bonus and a quadratic force penalty
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import InvalidActionError
from ..mdp import ActionSpec, Environment, Observation, StepOutcome


@dataclass(frozen=True)
class MountainCarParams:
    min_position: float = -1.2
    max_position: float = 0.6
    max_speed: float = 0.07
    goal_position: float = 0.45
    power: float = 0.0015
    gravity: float = 0.0025
    goal_reward: float = 100.0
    force_penalty: float = 0.1


@dataclass(frozen=True)
class MountainCarState:
    position: float
    velocity: float

    def as_array(self) -> np.ndarray:
        return np.array([self.position, self.velocity])


def mountaincar_dynamics(
    state: MountainCarState,
    force: float,
    params: MountainCarParams = MountainCarParams(),
) -> Tuple[MountainCarState, StepOutcome]:
    force = float(np.asarray(force).reshape(-1)[0])
    if not -1.0 <= force <= 1.0:
        raise InvalidActionError(f"Force {force} outside [-1, 1]")

    velocity = state.velocity + force * params.power - params.gravity * math.cos(
        3 * state.position
    )
    velocity = min(max(velocity, -params.max_speed), params.max_speed)
    position = min(max(state.position + velocity, params.min_position), params.max_position)
    if position == params.min_position and velocity < 0:
        velocity = 0.0

    terminal = position >= params.goal_position
    reward = -params.force_penalty * force**2
    if terminal:
        reward += params.goal_reward
    successor = MountainCarState(position=position, velocity=velocity)
    return successor, StepOutcome(
        reward=reward,
        next_observation=Observation(encoding=successor.as_array()),
        terminal=terminal,
    )


class MountainCar(Environment):
    env_id = "mountaincar"

    def __init__(self, turn_limit: int = 999, params: MountainCarParams = MountainCarParams()):
        super().__init__(
            action_spec=ActionSpec.continuous([-1.0], [1.0]),
            observation_dim=2,
            turn_limit=turn_limit,
        )
        self.params = params
        self.state: Optional[MountainCarState] = None

    def _reset(self) -> Observation:
        self.state = MountainCarState(position=float(self.rng.uniform(-0.6, -0.4)), velocity=0.0)
        return Observation(encoding=self.state.as_array())

    def _step(self, action):
        self.state, outcome = mountaincar_dynamics(self.state, action[0], self.params)
        return outcome.next_observation, outcome.reward, outcome.terminal
