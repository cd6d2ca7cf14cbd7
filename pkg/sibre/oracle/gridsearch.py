"""
Breadth-first search over gridworld states for a shortest solving action sequence
"""

from collections import deque
from typing import Callable, List, Optional, Tuple

from ..environments.gridworld import (
    FORWARD,
    GOAL_REWARD,
    PICKUP,
    STEP_PENALTY,
    TOGGLE,
    TURN_LEFT,
    TURN_RIGHT,
    GridWorld,
    doorkey_dynamics,
)
from ..mdp import StepOutcome

ACTIONS = (TURN_LEFT, TURN_RIGHT, FORWARD, PICKUP, TOGGLE)


def breadth_first_solve(
    world: GridWorld,
    dynamics: Callable[[GridWorld, int], Tuple[GridWorld, StepOutcome]] = doorkey_dynamics,
    max_depth: int = 10_000,
) -> Optional[List[int]]:
    """Shortest action list reaching the goal, or None when the goal is unreachable."""
    start = world.copy()
    parents = {start.signature(): None}
    queue = deque([(start, 0)])
    while queue:
        current, depth = queue.popleft()
        if depth >= max_depth:
            continue
        for action in ACTIONS:
            successor, outcome = dynamics(current, action)
            key = successor.signature()
            if outcome.terminal:
                path = [action]
                node = current.signature()
                while parents[node] is not None:
                    node, previous_action = parents[node]
                    path.append(previous_action)
                return path[::-1]
            if key not in parents:
                parents[key] = (current.signature(), action)
                queue.append((successor, depth + 1))
    return None


def scripted_return(actions: List[int]) -> float:
    """Return of an action list whose last action reaches the goal."""
    return GOAL_REWARD + STEP_PENALTY * (len(actions) - 1)
