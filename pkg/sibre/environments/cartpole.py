"""
Cart-pole balancing, episodic and continuing variants
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..mdp import ActionSpec, Environment, Observation, StepOutcome


@dataclass(frozen=True)
class CartPoleParams:
    gravity: float = 9.8
    cart_mass: float = 1.0
    pole_mass: float = 0.1
    half_length: float = 0.5
    force_magnitude: float = 10.0
    tau: float = 0.02
    theta_limit: float = 15 * 2 * math.pi / 360
    x_limit: float = 2.4


@dataclass(frozen=True)
class CartPoleState:
    x: float
    x_dot: float
    theta: float
    theta_dot: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.x_dot, self.theta, self.theta_dot])


def integrate_cartpole(
    state: CartPoleState, force: float, params: CartPoleParams = CartPoleParams()
) -> CartPoleState:
    """One explicit Euler step of the classic cart-pole equations of motion."""
    total_mass = params.cart_mass + params.pole_mass
    pole_mass_length = params.pole_mass * params.half_length
    cos_theta = math.cos(state.theta)
    sin_theta = math.sin(state.theta)

    temp = (force + pole_mass_length * state.theta_dot**2 * sin_theta) / total_mass
    theta_acc = (params.gravity * sin_theta - cos_theta * temp) / (
        params.half_length
        * (4.0 / 3.0 - params.pole_mass * cos_theta**2 / total_mass)
    )
    x_acc = temp - pole_mass_length * theta_acc * cos_theta / total_mass

    return CartPoleState(
        x=state.x + params.tau * state.x_dot,
        x_dot=state.x_dot + params.tau * x_acc,
        theta=state.theta + params.tau * state.theta_dot,
        theta_dot=state.theta_dot + params.tau * theta_acc,
    )


def cartpole_failed(state: CartPoleState, params: CartPoleParams = CartPoleParams()) -> bool:
    return abs(state.theta) > params.theta_limit or abs(state.x) > params.x_limit


def sample_cartpole_state(rng: np.random.Generator) -> CartPoleState:
    return CartPoleState(*rng.uniform(-0.05, 0.05, size=4))


def cartpole_dynamics(
    state: CartPoleState,
    force_direction: int,
    params: CartPoleParams = CartPoleParams(),
    continuing: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[CartPoleState, StepOutcome]:
    """
    force_direction in {-1, 0, +1} scales the force magnitude. The continuing
    variant pays -1 on failure and re-initializes internally without a terminal.
    """
    successor = integrate_cartpole(state, force_direction * params.force_magnitude, params)
    failed = cartpole_failed(successor, params)
    if continuing:
        reward = -1.0 if failed else 0.0
        if failed:
            if rng is None:
                raise ValueError("Continuing cart-pole needs an rng to re-initialize")
            successor = sample_cartpole_state(rng)
        terminal = False
    else:
        reward = 1.0
        terminal = failed
    return successor, StepOutcome(
        reward=reward,
        next_observation=Observation(encoding=successor.as_array()),
        terminal=terminal,
    )


class CartPole(Environment):
    env_id = "cartpole"

    def __init__(
        self,
        continuing: bool = False,
        turn_limit: Optional[int] = 500,
        params: CartPoleParams = CartPoleParams(),
    ):
        super().__init__(
            action_spec=ActionSpec.discrete(2),
            observation_dim=4,
            turn_limit=None if continuing else turn_limit,
        )
        self.continuing = continuing
        self.params = params
        self.state: Optional[CartPoleState] = None
        self.failures = 0

    def _reset(self) -> Observation:
        self.state = sample_cartpole_state(self.rng)
        self.failures = 0
        return Observation(encoding=self.state.as_array())

    def _step(self, action: int):
        self.state, outcome = cartpole_dynamics(
            self.state,
            1 if action == 1 else -1,
            self.params,
            continuing=self.continuing,
            rng=self.rng,
        )
        if self.continuing and outcome.reward < 0:
            self.failures += 1
        return outcome.next_observation, outcome.reward, outcome.terminal
