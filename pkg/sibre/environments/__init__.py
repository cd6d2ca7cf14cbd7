from .cartpole import (
    CartPole,
    CartPoleParams,
    CartPoleState,
    cartpole_dynamics,
    cartpole_failed,
    integrate_cartpole,
)
from .chain import ChainMDP
from .frozen_lake import FROZEN_LAKE_4X4, FrozenLake, frozen_lake_dynamics, slip_directions
from .gridworld import (
    DoorKey,
    GridWorld,
    MultiRoom,
    doorkey_dynamics,
    dump_layout,
    encode_grid,
    generate_doorkey,
    generate_multiroom,
    multiroom_dynamics,
    parse_layout,
)
from .mountaincar import MountainCar, MountainCarParams, MountainCarState, mountaincar_dynamics
from .registry import ENVIRONMENTS, make_environment
