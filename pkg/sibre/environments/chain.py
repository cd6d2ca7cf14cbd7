"""
Deterministic chain MDP: walk right to the last state for reward 1
"""

import numpy as np

from ..mdp import ActionSpec, Environment, Observation, TabularModel

LEFT, RIGHT = 0, 1


class ChainMDP(Environment):
    env_id = "chain"

    def __init__(self, length: int = 2, turn_limit: int = 100):
        if length < 2:
            raise ValueError("Chain needs at least a start and a goal state")
        super().__init__(
            action_spec=ActionSpec.discrete(2),
            observation_dim=length,
            turn_limit=turn_limit,
            num_states=length,
        )
        self.length = length
        self.state = 0

    def _observation(self) -> Observation:
        encoding = np.zeros(self.length)
        encoding[self.state] = 1.0
        return Observation(encoding=encoding, discrete_index=self.state)

    def _next(self, state: int, action: int) -> int:
        return min(state + 1, self.length - 1) if action == RIGHT else max(state - 1, 0)

    def _reset(self) -> Observation:
        self.state = 0
        return self._observation()

    def _step(self, action: int):
        self.state = self._next(self.state, action)
        terminal = self.state == self.length - 1
        return self._observation(), 1.0 if terminal else 0.0, terminal

    def transition_model(self) -> TabularModel:
        goal = self.length - 1
        transitions = []
        for s in range(self.length):
            if s == goal:
                transitions.append([[(1.0, s, 0.0, True)] for _ in range(2)])
                continue
            entries = []
            for a in (LEFT, RIGHT):
                s_next = self._next(s, a)
                entries.append([(1.0, s_next, 1.0 if s_next == goal else 0.0, s_next == goal)])
            transitions.append(entries)
        return TabularModel(
            num_states=self.length,
            num_actions=2,
            transitions=transitions,
            start_state=0,
            terminal_states=frozenset({goal}),
        )
