"""
Explicit transition model of a tabular environment
"""

from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

import numpy as np

Transition = Tuple[float, int, float, bool]


@dataclass(frozen=True)
class TabularModel:
    """
    transitions[s][a] lists (probability, next_state, reward, terminal).
    Terminal states are absorbing with value zero.
    """

    num_states: int
    num_actions: int
    transitions: List[List[List[Transition]]]
    start_state: int
    terminal_states: FrozenSet[int]

    def expected_rewards(self) -> np.ndarray:
        rewards = np.zeros((self.num_states, self.num_actions))
        for s in range(self.num_states):
            for a in range(self.num_actions):
                rewards[s, a] = sum(p * r for p, _, r, _ in self.transitions[s][a])
        return rewards

    def continuation_matrix(self) -> np.ndarray:
        """
        continuation[s, a, s'] = P(s' | s, a) restricted to non-terminal arrivals.
        """
        continuation = np.zeros((self.num_states, self.num_actions, self.num_states))
        for s in range(self.num_states):
            if s in self.terminal_states:
                continue
            for a in range(self.num_actions):
                for p, s_next, _, done in self.transitions[s][a]:
                    if not done:
                        continuation[s, a, s_next] += p
        return continuation

    def transition_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.num_states, self.num_actions, self.num_states))
        for s in range(self.num_states):
            for a in range(self.num_actions):
                for p, s_next, _, _ in self.transitions[s][a]:
                    matrix[s, a, s_next] += p
        return matrix
