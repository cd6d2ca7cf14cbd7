"""
Tabular Q-learning with an optional self-improvement shaper
"""

import logging
import time
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence

import numpy as np

from ..errors import UnsupportedEnvironmentError
from ..mdp import Environment
from ..shaper import ThresholdState
from .common import explore_or_exploit, make_driver, next_episode_seed, seed_streams
from .config import AgentConfig
from .results import CurveRecorder, RunResult, SeedRun

logger = logging.getLogger(__name__)


@dataclass
class QTable:
    table: np.ndarray
    learning_rate: float
    gamma: float
    terminal_states: FrozenSet[int] = frozenset()

    @classmethod
    def zeros(
        cls,
        num_states: int,
        num_actions: int,
        learning_rate: float,
        gamma: float,
        terminal_states: FrozenSet[int] = frozenset(),
    ) -> "QTable":
        return cls(np.zeros((num_states, num_actions)), learning_rate, gamma, terminal_states)

    @property
    def num_actions(self) -> int:
        return self.table.shape[1]

    def greedy_policy(self) -> np.ndarray:
        return np.argmax(self.table, axis=1)


def q_update(
    qtable: QTable, s: int, a: int, r: float, s_next: int, terminal: bool
) -> QTable:
    """Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)); terminal s' bootstraps zero."""
    if terminal or s_next in qtable.terminal_states:
        bootstrap = 0.0
    else:
        bootstrap = float(np.max(qtable.table[s_next]))
    td_error = r + qtable.gamma * bootstrap - qtable.table[s, a]
    qtable.table[s, a] += qtable.learning_rate * td_error
    return qtable


def epsilon_greedy(qtable: QTable, s: int, epsilon: float, rng: np.random.Generator) -> int:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    return explore_or_exploit(qtable.table[s], epsilon, rng)


def _terminal_states(env: Environment) -> FrozenSet[int]:
    try:
        return env.transition_model().terminal_states
    except NotImplementedError:
        return frozenset()


def _train_seed(
    env: Environment, config: AgentConfig, shaper: Optional[ThresholdState], seed: int
) -> SeedRun:
    started = time.perf_counter()
    env_rng, agent_rng = seed_streams(seed)
    qtable = QTable.zeros(
        env.num_states,
        env.action_spec.count,
        config.learning_rate,
        config.gamma,
        _terminal_states(env),
    )
    driver = make_driver(shaper)
    start_rho = None if driver is None else driver.rho
    schedule = config.epsilon_schedule
    budget = config.training_budget
    recorder = CurveRecorder(continuing=False, report_window=config.report_window)

    frames = episodes = 0
    while not budget.exhausted(episodes, frames):
        fraction = budget.fraction(episodes, frames)
        s = env.reset(next_episode_seed(env_rng)).discrete_index
        while True:
            epsilon = schedule.value_at(frames, episodes)
            a = epsilon_greedy(qtable, s, epsilon, agent_rng)
            outcome = env.step(a)
            frames += 1
            reward = outcome.reward
            if driver is not None:
                reward = driver.shape(outcome, fraction).value
            s_next = outcome.next_observation.discrete_index
            q_update(qtable, s, a, reward, s_next, outcome.terminal)
            s = s_next
            if recorder.observe(outcome.reward, outcome.ends_episode, frames, driver, epsilon):
                break
        episodes += 1
        if episodes % config.log_every == 0:
            recent = recorder.points[-config.log_every :]
            logger.debug(
                "seed %d episode %d: mean return %.3f over last %d",
                seed,
                episodes,
                np.mean([p.ret for p in recent]),
                len(recent),
            )

    return SeedRun(
        seed=seed,
        points=recorder.points,
        frames=frames,
        episodes=episodes,
        wall_clock=time.perf_counter() - started,
        threshold=None if driver is None else driver.state,
        start_rho=start_rho,
        qtable=qtable,
    )


def train_tabular_q(
    env: Environment,
    config: AgentConfig,
    shaper: Optional[ThresholdState] = None,
    seeds: Sequence[int] = (0,),
) -> RunResult:
    if not env.is_tabular or not env.action_spec.is_discrete:
        raise UnsupportedEnvironmentError(
            f"Tabular Q-learning needs a tabular environment, got {env.env_id}"
        )
    result = RunResult(agent="tabular_q", arm="sibre" if shaper is not None else "baseline")
    for seed in seeds:
        run = _train_seed(env, config, shaper, seed)
        logger.info(
            "tabular_q %s seed %d: %d episodes, final return %.3f",
            result.arm,
            seed,
            run.episodes,
            run.points[-1].ret if run.points else float("nan"),
        )
        result.runs.append(run)
    return result
