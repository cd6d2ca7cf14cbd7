"""
Per-seed learning curves, checkpoints and the run container
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..mdp import ActionSpec
from ..shaper import SibreShaper, ThresholdState
from ..tinynet import DenseNet


@dataclass
class CurvePoint:
    index: int
    ret: float
    rho: Optional[float]
    beta: Optional[float]
    epsilon: Optional[float]
    steps: int


@dataclass
class AgentCheckpoint:
    agent: str
    networks: Dict[str, DenseNet]
    observation_dim: int
    action_spec: ActionSpec
    threshold: Optional[ThresholdState] = None
    frames: int = 0
    episodes: int = 0
    curve_points: int = 0

    def copy(self) -> "AgentCheckpoint":
        return AgentCheckpoint(
            agent=self.agent,
            networks={name: net.copy() for name, net in self.networks.items()},
            observation_dim=self.observation_dim,
            action_spec=self.action_spec,
            threshold=self.threshold,
            frames=self.frames,
            episodes=self.episodes,
            curve_points=self.curve_points,
        )


@dataclass
class SeedRun:
    seed: int
    points: List[CurvePoint] = field(default_factory=list)
    frames: int = 0
    episodes: int = 0
    wall_clock: float = 0.0
    threshold: Optional[ThresholdState] = None
    start_rho: Optional[float] = None
    checkpoint: Optional[AgentCheckpoint] = None
    qtable: Optional[object] = None

    @property
    def returns(self) -> np.ndarray:
        return np.array([p.ret for p in self.points])

    @property
    def rho_trace(self) -> np.ndarray:
        return np.array([np.nan if p.rho is None else p.rho for p in self.points])


@dataclass
class RunResult:
    agent: str
    arm: str
    runs: List[SeedRun] = field(default_factory=list)
    config_hash: str = ""

    @property
    def seeds(self) -> List[int]:
        return [run.seed for run in self.runs]

    def curve_matrix(self) -> np.ndarray:
        """Seeds x points, truncated to the shortest curve."""
        length = min((len(run.points) for run in self.runs), default=0)
        return np.array([run.returns[:length] for run in self.runs]).reshape(len(self.runs), length)


class CurveRecorder:
    """
    Closes one learning-curve point per episode, or per `report_window` steps
    in continuing tasks. Returns are always on the original reward scale.
    """

    def __init__(self, continuing: bool, report_window: int, index_offset: int = 0):
        self.continuing = continuing
        self.report_window = report_window
        self.points: List[CurvePoint] = []
        self._index_offset = index_offset
        self._return = 0.0
        self._steps = 0

    @property
    def next_index(self) -> int:
        return self._index_offset + len(self.points)

    def observe(
        self,
        reward: float,
        ends_episode: bool,
        frames: int,
        driver: Optional[SibreShaper],
        epsilon: Optional[float] = None,
    ) -> bool:
        self._return += reward
        self._steps += 1
        closed = self._steps >= self.report_window if self.continuing else ends_episode
        if closed:
            self.points.append(
                CurvePoint(
                    index=self.next_index,
                    ret=self._return,
                    rho=None if driver is None else driver.rho,
                    beta=None if driver is None else driver.beta,
                    epsilon=epsilon,
                    steps=frames,
                )
            )
            self._return = 0.0
            self._steps = 0
        return closed
