from .env import Environment
from .episode import compute_return, discounted_sum, reset, run_episode, step
from .model import TabularModel
from .types import (
    ActionSpec,
    EpisodeTrace,
    Observation,
    ReturnValue,
    StepOutcome,
    TraceStep,
)
