"""
Door & Key and multi-room gridworlds with a constant step penalty and a goal reward
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..mdp import ActionSpec, Environment, Observation, StepOutcome

WALL, FLOOR, GOAL, KEY, LOCKED_DOOR, CLOSED_DOOR, OPEN_DOOR = "#", ".", "G", "K", "L", "C", "O"
CELL_TYPES = (WALL, FLOOR, GOAL, KEY, LOCKED_DOOR, CLOSED_DOOR, OPEN_DOOR)
HEADING_CHARS = ">v<^"
_HEADING_VECTORS = ((0, 1), (1, 0), (0, -1), (-1, 0))

TURN_LEFT, TURN_RIGHT, FORWARD, PICKUP, TOGGLE = range(5)

STEP_PENALTY = -0.1
GOAL_REWARD = 4.0
DEFAULT_TURN_LIMIT = 1000


@dataclass
class GridWorld:
    layout: np.ndarray
    agent: Tuple[int, int]
    heading: int
    carrying_key: bool = False

    @property
    def height(self) -> int:
        return self.layout.shape[0]

    @property
    def width(self) -> int:
        return self.layout.shape[1]

    def copy(self) -> "GridWorld":
        return GridWorld(self.layout.copy(), self.agent, self.heading, self.carrying_key)

    def front(self) -> Tuple[int, int]:
        d_row, d_col = _HEADING_VECTORS[self.heading]
        return self.agent[0] + d_row, self.agent[1] + d_col

    def cell(self, position: Tuple[int, int]) -> str:
        row, col = position
        if not (0 <= row < self.height and 0 <= col < self.width):
            return WALL
        return str(self.layout[row, col])

    def count(self, cell_type: str) -> int:
        return int(np.count_nonzero(self.layout == cell_type))

    def signature(self) -> Tuple:
        return (self.agent, self.heading, self.carrying_key, self.layout.tobytes())


def _apply(world: GridWorld, action: int) -> Tuple[float, bool]:
    if action == TURN_LEFT:
        world.heading = (world.heading - 1) % 4
    elif action == TURN_RIGHT:
        world.heading = (world.heading + 1) % 4
    elif action == FORWARD:
        target = world.front()
        cell = world.cell(target)
        if cell == GOAL:
            world.agent = target
            return GOAL_REWARD, True
        if cell in (FLOOR, OPEN_DOOR):
            world.agent = target
    elif action == PICKUP:
        target = world.front()
        if world.cell(target) == KEY and not world.carrying_key:
            world.carrying_key = True
            world.layout[target] = FLOOR
    elif action == TOGGLE:
        target = world.front()
        cell = world.cell(target)
        if cell == LOCKED_DOOR and world.carrying_key:
            world.layout[target] = OPEN_DOOR
        elif cell == CLOSED_DOOR:
            world.layout[target] = OPEN_DOOR
        elif cell == OPEN_DOOR:
            world.layout[target] = CLOSED_DOOR
    return STEP_PENALTY, False


def doorkey_dynamics(
    world: GridWorld, action: int, encoding_size: Optional[int] = None
) -> Tuple[GridWorld, StepOutcome]:
    """Successor world and outcome; `world` itself is left untouched."""
    successor = world.copy()
    reward, terminal = _apply(successor, action)
    size = encoding_size or max(successor.height, successor.width)
    return successor, StepOutcome(
        reward=reward,
        next_observation=encode_grid(successor, size),
        terminal=terminal,
    )


def multiroom_dynamics(
    world: GridWorld, action: int, encoding_size: Optional[int] = None
) -> Tuple[GridWorld, StepOutcome]:
    # Rooms share the door/goal rules; only the layouts differ.
    return doorkey_dynamics(world, action, encoding_size)


def encode_grid(world: GridWorld, encoding_size: int) -> Observation:
    """
    One-hot planes (cell type x position, plus one agent plane) on an
    encoding_size x encoding_size canvas, then heading one-hot and key flag.
    """
    if world.height > encoding_size or world.width > encoding_size:
        raise ValueError(
            f"{world.height}x{world.width} grid does not fit a {encoding_size} encoding"
        )
    planes = np.zeros((len(CELL_TYPES) + 1, encoding_size, encoding_size))
    for index, cell_type in enumerate(CELL_TYPES):
        planes[index, : world.height, : world.width] = world.layout == cell_type
    planes[len(CELL_TYPES), world.agent[0], world.agent[1]] = 1.0
    heading = np.zeros(4)
    heading[world.heading] = 1.0
    return Observation(
        encoding=np.concatenate(
            [planes.ravel(), heading, [1.0 if world.carrying_key else 0.0]]
        )
    )


def encoding_dim(encoding_size: int) -> int:
    return (len(CELL_TYPES) + 1) * encoding_size * encoding_size + 5


def dump_layout(world: GridWorld) -> str:
    rows = [list(row) for row in world.layout]
    rows[world.agent[0]][world.agent[1]] = HEADING_CHARS[world.heading]
    return "\n".join("".join(row) for row in rows)


def parse_layout(text: str, carrying_key: bool = False) -> GridWorld:
    rows = [line for line in text.strip().splitlines() if line]
    if len({len(row) for row in rows}) != 1:
        raise ValueError("Layout rows must all have the same width")
    layout = np.array([list(row) for row in rows], dtype="<U1")
    agent, heading = None, 0
    for (row, col), char in np.ndenumerate(layout):
        if char in HEADING_CHARS:
            if agent is not None:
                raise ValueError("Layout has more than one agent")
            agent, heading = (row, col), HEADING_CHARS.index(char)
            layout[row, col] = FLOOR
        elif char not in CELL_TYPES:
            raise ValueError(f"Unknown layout character {char!r}")
    if agent is None:
        raise ValueError("Layout has no agent")
    world = GridWorld(layout=layout, agent=agent, heading=heading, carrying_key=carrying_key)
    if world.count(GOAL) != 1:
        raise ValueError("Layout needs exactly one goal")
    return world


def _walled_canvas(size: int) -> np.ndarray:
    layout = np.full((size, size), FLOOR, dtype="<U1")
    layout[0, :] = layout[-1, :] = WALL
    layout[:, 0] = layout[:, -1] = WALL
    return layout


def _cells(rows: range, cols: range) -> List[Tuple[int, int]]:
    return [(r, c) for r in rows for c in cols]


def generate_doorkey(size: int, rng: np.random.Generator) -> GridWorld:
    """
    Dividing wall at a seeded column with a locked door at a seeded row; agent
    and key on the left, goal on the right.
    """
    if size < 5:
        raise ValueError("DoorKey needs size >= 5")
    layout = _walled_canvas(size)
    split = int(rng.integers(2, size - 2))
    layout[1:-1, split] = WALL
    door_row = int(rng.integers(1, size - 1))
    layout[door_row, split] = LOCKED_DOOR

    left = _cells(range(1, size - 1), range(1, split))
    right = _cells(range(1, size - 1), range(split + 1, size - 1))
    goal = right[int(rng.integers(len(right)))]
    layout[goal] = GOAL
    agent_index, key_index = rng.choice(len(left), size=2, replace=False)
    layout[left[int(key_index)]] = KEY
    return GridWorld(
        layout=layout, agent=left[int(agent_index)], heading=int(rng.integers(4))
    )


def generate_multiroom(
    size: int, rng: np.random.Generator, num_rooms: int = 2
) -> GridWorld:
    """
    Rooms side by side, separated by walls with closed (unlocked) doors; the
    agent starts in the first room and the goal sits in the last one.
    """
    max_splits = (size - 3) // 2
    if num_rooms < 2 or num_rooms - 1 > max_splits:
        raise ValueError(f"Cannot fit {num_rooms} rooms in a {size}x{size} grid")
    layout = _walled_canvas(size)
    # Split columns need at least one floor column between them.
    while True:
        splits = sorted(
            int(c) for c in rng.choice(np.arange(2, size - 2), num_rooms - 1, replace=False)
        )
        if all(b - a >= 2 for a, b in zip(splits, splits[1:])):
            break
    for split in splits:
        layout[1:-1, split] = WALL
        layout[int(rng.integers(1, size - 1)), split] = CLOSED_DOOR

    first = _cells(range(1, size - 1), range(1, splits[0]))
    last = _cells(range(1, size - 1), range(splits[-1] + 1, size - 1))
    goal = last[int(rng.integers(len(last)))]
    layout[goal] = GOAL
    agent = first[int(rng.integers(len(first)))]
    return GridWorld(layout=layout, agent=agent, heading=int(rng.integers(4)))


class _GridEnvironment(Environment):
    def __init__(self, size: int, encoding_size: Optional[int], turn_limit: int, layout: Optional[str]):
        self.size = size
        self.fixed_layout = layout
        self.encoding_size = encoding_size or size
        if self.encoding_size < size:
            raise ValueError("encoding_size must be at least the grid size")
        super().__init__(
            action_spec=ActionSpec.discrete(5),
            observation_dim=encoding_dim(self.encoding_size),
            turn_limit=turn_limit,
        )
        self.world: Optional[GridWorld] = None

    def _generate(self) -> GridWorld:
        raise NotImplementedError

    def _reset(self) -> Observation:
        if self.fixed_layout is not None:
            self.world = parse_layout(self.fixed_layout)
        else:
            self.world = self._generate()
        return encode_grid(self.world, self.encoding_size)

    def _step(self, action: int):
        self.world, outcome = self.dynamics(self.world, action, self.encoding_size)
        return outcome.next_observation, outcome.reward, outcome.terminal


class DoorKey(_GridEnvironment):
    env_id = "doorkey"
    dynamics = staticmethod(doorkey_dynamics)

    def __init__(
        self,
        size: int = 6,
        encoding_size: Optional[int] = 8,
        turn_limit: int = DEFAULT_TURN_LIMIT,
        layout: Optional[str] = None,
    ):
        super().__init__(size, encoding_size, turn_limit, layout)

    def _generate(self) -> GridWorld:
        return generate_doorkey(self.size, self.rng)


class MultiRoom(_GridEnvironment):
    env_id = "multiroom"
    dynamics = staticmethod(multiroom_dynamics)

    def __init__(
        self,
        size: int = 8,
        num_rooms: int = 2,
        encoding_size: Optional[int] = 8,
        turn_limit: int = DEFAULT_TURN_LIMIT,
        layout: Optional[str] = None,
    ):
        self.num_rooms = num_rooms
        super().__init__(size, encoding_size, turn_limit, layout)

    def _generate(self) -> GridWorld:
        return generate_multiroom(self.size, self.rng, self.num_rooms)
