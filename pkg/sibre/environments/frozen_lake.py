"""
FrozenLake: slippery 4x4 grid with holes and a single goal
"""

from typing import Sequence, Tuple

import numpy as np

from ..mdp import ActionSpec, Environment, Observation, StepOutcome, TabularModel

FROZEN_LAKE_4X4 = ("SFFF", "FHFH", "FFFH", "HFFG")

LEFT, DOWN, RIGHT, UP = 0, 1, 2, 3
_MOVES = {LEFT: (0, -1), DOWN: (1, 0), RIGHT: (0, 1), UP: (-1, 0)}


def slip_directions(action: int) -> Tuple[int, int, int]:
    """Intended direction plus its two perpendiculars, each taken with probability 1/3."""
    return ((action - 1) % 4, action, (action + 1) % 4)


def _move(lake_map: Sequence[str], state: int, direction: int) -> int:
    ncols = len(lake_map[0])
    row, col = divmod(state, ncols)
    d_row, d_col = _MOVES[direction]
    row = min(max(row + d_row, 0), len(lake_map) - 1)
    col = min(max(col + d_col, 0), ncols - 1)
    return row * ncols + col


def _cell(lake_map: Sequence[str], state: int) -> str:
    row, col = divmod(state, len(lake_map[0]))
    return lake_map[row][col]


def _observation(state: int, num_states: int) -> Observation:
    encoding = np.zeros(num_states)
    encoding[state] = 1.0
    return Observation(encoding=encoding, discrete_index=state)


def frozen_lake_dynamics(
    lake_map: Sequence[str],
    state: int,
    action: int,
    rng: np.random.Generator,
    slippery: bool = True,
) -> Tuple[int, StepOutcome]:
    direction = action
    if slippery and _cell(lake_map, state) in "SF":
        direction = slip_directions(action)[int(rng.integers(3))]
    next_state = _move(lake_map, state, direction)
    cell = _cell(lake_map, next_state)
    outcome = StepOutcome(
        reward=1.0 if cell == "G" else 0.0,
        next_observation=_observation(next_state, len(lake_map) * len(lake_map[0])),
        terminal=cell in "GH",
    )
    return next_state, outcome


class FrozenLake(Environment):
    env_id = "frozenlake"

    def __init__(
        self,
        lake_map: Sequence[str] = FROZEN_LAKE_4X4,
        slippery: bool = True,
        turn_limit: int = 100,
    ):
        self.lake_map = tuple(lake_map)
        if len({len(row) for row in self.lake_map}) != 1:
            raise ValueError("Every FrozenLake row must have the same width")
        if sum(row.count("G") for row in self.lake_map) != 1:
            raise ValueError("FrozenLake map needs exactly one goal")
        num_states = len(self.lake_map) * len(self.lake_map[0])
        super().__init__(
            action_spec=ActionSpec.discrete(4),
            observation_dim=num_states,
            turn_limit=turn_limit,
            num_states=num_states,
        )
        self.slippery = slippery
        self.start_state = "".join(self.lake_map).index("S")
        self.state = self.start_state

    def _reset(self) -> Observation:
        self.state = self.start_state
        return _observation(self.state, self.num_states)

    def _step(self, action: int):
        self.state, outcome = frozen_lake_dynamics(
            self.lake_map, self.state, action, self.rng, self.slippery
        )
        return outcome.next_observation, outcome.reward, outcome.terminal

    def transition_model(self) -> TabularModel:
        transitions = []
        terminal_states = set()
        for s in range(self.num_states):
            if _cell(self.lake_map, s) in "GH":
                terminal_states.add(s)
                transitions.append([[(1.0, s, 0.0, True)] for _ in range(4)])
                continue
            per_action = []
            for a in range(4):
                directions = slip_directions(a) if self.slippery else (a,)
                prob = 1.0 / len(directions)
                entries = []
                for direction in directions:
                    s_next = _move(self.lake_map, s, direction)
                    cell = _cell(self.lake_map, s_next)
                    entries.append((prob, s_next, 1.0 if cell == "G" else 0.0, cell in "GH"))
                per_action.append(entries)
            transitions.append(per_action)
        return TabularModel(
            num_states=self.num_states,
            num_actions=4,
            transitions=transitions,
            start_state=self.start_state,
            terminal_states=frozenset(terminal_states),
        )
