from .schedule import BetaSchedule, current_beta
from .shaper import SibreShaper
from .threshold import (
    CONTINUING,
    EPISODIC,
    ShapedReward,
    ThresholdMode,
    ThresholdState,
    continuing_window_return,
    record_return_and_maybe_update,
    shape_step,
)
