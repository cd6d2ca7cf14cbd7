"""
Build environments from their config id and parameters
"""

from typing import Any, Callable, Dict

from ..errors import ConfigError
from ..mdp import Environment
from .cartpole import CartPole
from .chain import ChainMDP
from .frozen_lake import FrozenLake
from .gridworld import DoorKey, MultiRoom
from .mountaincar import MountainCar

ENVIRONMENTS: Dict[str, Callable[..., Environment]] = {
    "frozenlake": FrozenLake,
    "chain": ChainMDP,
    "doorkey": DoorKey,
    "multiroom": MultiRoom,
    "cartpole": CartPole,
    "cartpole_continuing": lambda **params: CartPole(continuing=True, **params),
    "mountaincar": MountainCar,
}


def make_environment(env_id: str, **params: Any) -> Environment:
    try:
        factory = ENVIRONMENTS[env_id]
    except KeyError:
        raise ConfigError(
            f"Unknown environment {env_id!r}; choose from {sorted(ENVIRONMENTS)}"
        ) from None
    try:
        return factory(**params)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Bad parameters for {env_id!r}: {e}") from e
