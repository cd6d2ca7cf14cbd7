from .config import (
    PRESETS,
    ExperimentConfig,
    ShaperConfig,
    TransferConfig,
    expand_config,
    load_config,
    parse_seeds,
)
from .initialization import HarnessSettings, load_return_env, load_settings
from .plots import emit_plots, plot_aggregate, trailing_mean
from .runner import (
    ExperimentOutcome,
    ExperimentRunner,
    config_for_value,
    run_experiment,
    run_sweep,
    run_transfer,
)
from .stats import RunStatistics
