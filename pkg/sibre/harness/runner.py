"""
Seeded experiment runs, sweeps and two-stage transfer with CSV outputs
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Generator, List, Mapping, Optional, Sequence, Union

from ..agents import AgentCheckpoint, RunResult, get_trainer, save_checkpoint, transfer_checkpoint
from ..environments import make_environment
from ..errors import ConfigError
from ..shaper import BetaSchedule
from ..tools import save_markdown_file
from .config import (
    BETA_VALUES,
    LEARNING_RATES,
    SCHEDULE_VALUE,
    ExperimentConfig,
    expand_config,
)
from .curves import (
    SUMMARY_COLUMNS,
    aggregate_seed_files,
    compare_arms,
    summary_row,
    write_aggregate,
    write_csv,
    write_run_csvs,
)
from .initialization import HarnessSettings, load_settings
from .stats import RunStatistics

logger = logging.getLogger(__name__)

SIBRE_ARM, BASELINE_ARM = "sibre", "baseline"


@dataclass
class ExperimentOutcome:
    config: ExperimentConfig
    output_dir: Path
    results: Dict[str, RunResult] = field(default_factory=dict)
    statistics: Dict[str, RunStatistics] = field(default_factory=dict)
    seed_paths: Dict[str, List[Path]] = field(default_factory=dict)
    aggregate_path: Optional[Path] = None
    report_path: Optional[Path] = None


@dataclass
class TransferOutcome:
    stage1: ExperimentOutcome
    stage2: Optional[ExperimentOutcome]
    combined: ExperimentOutcome


@dataclass
class SweepOutcome:
    axis: str
    values: List[Any]
    outcomes: List[ExperimentOutcome]
    summary_path: Path


def _train_arm_seed(
    config_data: dict, arm: str, seed: int, resume: Optional[AgentCheckpoint] = None
) -> RunResult:
    """One (arm, seed) training run; module-level so worker processes can pickle it."""
    config = expand_config(config_data)
    env = make_environment(config.environment, **config.environment_params)
    shaper = config.shaper.threshold_state() if arm == SIBRE_ARM else None
    trainer = get_trainer(config.agent)
    kwargs = {} if resume is None else {"resume": {seed: resume}}
    return trainer(env, config.agent_config, shaper, seeds=(seed,), **kwargs)


def arms_for(config: ExperimentConfig) -> List[str]:
    arms = []
    if config.shaper.enabled:
        arms.append(SIBRE_ARM)
    if config.compare_baseline or not config.shaper.enabled:
        arms.append(BASELINE_ARM)
    return arms


class ExperimentRunner:
    """
    Runs every arm of a config over its seeds. `run` yields progress strings and
    per-arm RunStatistics, then the finished ExperimentOutcome.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        output_dir: Optional[Union[str, Path]] = None,
        settings: Optional[HarnessSettings] = None,
        resume: Optional[Mapping[str, Mapping[int, AgentCheckpoint]]] = None,
    ):
        self.config = config
        self.settings = settings or load_settings()
        self.output_dir = Path(output_dir or config.output_dir or self.settings.output_dir)
        self.resume = resume or {}

    def _train_arm(self, arm: str) -> RunResult:
        data = self.config.to_dict()
        checkpoints = self.resume.get(arm, {})
        jobs = [(data, arm, seed, checkpoints.get(seed)) for seed in self.config.seeds]
        if self.settings.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=self.settings.workers) as pool:
                partial = list(pool.map(_train_arm_seed, *zip(*jobs)))
        else:
            partial = [_train_arm_seed(*job) for job in jobs]

        merged = RunResult(agent=self.config.agent, arm=arm, config_hash=self.config.config_hash)
        for result in partial:
            merged.runs.extend(result.runs)
        merged.runs.sort(key=lambda run: self.config.seeds.index(run.seed))
        return merged

    def run(self) -> Generator[Union[str, RunStatistics, ExperimentOutcome], None, None]:
        outcome = ExperimentOutcome(config=self.config, output_dir=self.output_dir)
        yield f"Config {self.config.preset} hash {self.config.config_hash}"

        per_arm_rows = {}
        for arm in arms_for(self.config):
            yield f"Training {self.config.agent} ({arm}) on seeds {list(self.config.seeds)}"
            result = self._train_arm(arm)
            outcome.results[arm] = result
            outcome.seed_paths[arm] = write_run_csvs(self.output_dir, result)
            per_arm_rows[arm] = aggregate_seed_files(arm, outcome.seed_paths[arm])

            stats = RunStatistics.from_result(result)
            outcome.statistics[arm] = stats
            yield stats

        outcome.aggregate_path = write_aggregate(self.output_dir / "aggregate.csv", per_arm_rows)
        (self.output_dir / "config.json").write_text(self.config.to_json() + "\n")
        outcome.report_path = write_report(outcome)
        yield f"Wrote {outcome.aggregate_path}"
        yield outcome


def _consume(runner: ExperimentRunner) -> ExperimentOutcome:
    outcome = None
    for update in runner.run():
        if isinstance(update, ExperimentOutcome):
            outcome = update
        elif isinstance(update, RunStatistics):
            logger.info("%s", update)
        else:
            logger.info(update)
    return outcome


def run_experiment(
    config: ExperimentConfig,
    output_dir: Optional[Union[str, Path]] = None,
    settings: Optional[HarnessSettings] = None,
) -> ExperimentOutcome:
    return _consume(ExperimentRunner(config, output_dir, settings))


def config_for_value(config: ExperimentConfig, axis: str, value: Any) -> ExperimentConfig:
    data = config.to_dict()
    if axis == BETA_VALUES:
        if value != SCHEDULE_VALUE:
            data["shaper"]["schedule"] = BetaSchedule.constant(float(value)).to_dict()
    elif axis == LEARNING_RATES:
        data["agent"]["config"]["learning_rate"] = float(value)
    else:
        raise ConfigError(f"Cannot sweep over {axis!r}; use beta_values or learning_rates")
    data["sweep"] = {"axis": "none", "values": []}
    return expand_config(data)


def _value_label(value: Any) -> str:
    return str(value).replace("/", "_")


def run_sweep(
    config: ExperimentConfig,
    axis: Optional[str] = None,
    values: Optional[Sequence[Any]] = None,
    output_dir: Optional[Union[str, Path]] = None,
    settings: Optional[HarnessSettings] = None,
) -> SweepOutcome:
    """
    One experiment per axis value plus a summary row per (value, arm). On the
    beta axis the baseline arm does not depend on the value, so it runs once.
    """
    axis = axis or config.sweep_axis
    values = list(values if values is not None else config.sweep_values)
    if axis not in (BETA_VALUES, LEARNING_RATES):
        raise ConfigError(f"Cannot sweep over {axis!r}; use beta_values or learning_rates")
    if not values:
        raise ConfigError("Sweep needs at least one value")
    settings = settings or load_settings()
    root = Path(output_dir or config.output_dir or settings.output_dir)

    outcomes, rows = [], []
    shared_baseline: Optional[RunResult] = None
    for i, value in enumerate(values):
        value_config = config_for_value(config, axis, value)
        if axis == BETA_VALUES and i > 0:
            value_config = replace(value_config, compare_baseline=False)
        outcome = run_experiment(value_config, root / f"{axis}_{_value_label(value)}", settings)
        outcomes.append(outcome)

        if BASELINE_ARM in outcome.results:
            shared_baseline = outcome.results[BASELINE_ARM]
        for arm in (SIBRE_ARM, BASELINE_ARM):
            result = outcome.results.get(arm)
            if result is None and arm == BASELINE_ARM and axis == BETA_VALUES:
                result = shared_baseline
            if result is not None:
                rows.append(summary_row(axis, value, result, config.final_window))

    summary_path = write_csv(root / "summary.csv", SUMMARY_COLUMNS, rows)
    logger.info("sweep over %s with %d values written to %s", axis, len(values), summary_path)
    return SweepOutcome(axis=axis, values=values, outcomes=outcomes, summary_path=summary_path)


def _concatenate(first: RunResult, second: RunResult) -> RunResult:
    combined = RunResult(agent=first.agent, arm=first.arm, config_hash=first.config_hash)
    for run_a, run_b in zip(first.runs, second.runs):
        combined.runs.append(
            replace(
                run_b,
                points=run_a.points + run_b.points,
                frames=run_a.frames + run_b.frames,
                episodes=run_a.episodes + run_b.episodes,
                wall_clock=run_a.wall_clock + run_b.wall_clock,
                start_rho=run_a.start_rho,
            )
        )
    return combined


def stage_two_config(config: ExperimentConfig) -> ExperimentConfig:
    data = config.to_dict()
    data["environment"] = config.transfer.to_dict()["environment"]
    data["agent"]["config"]["budget"] = config.transfer.budget
    data["transfer"] = None
    return expand_config(data)


def run_transfer(
    config: ExperimentConfig,
    output_dir: Optional[Union[str, Path]] = None,
    settings: Optional[HarnessSettings] = None,
) -> TransferOutcome:
    """
    Stage one on the source environment, then every arm resumes its per-seed
    checkpoint on the target environment. Curves and frame counts continue
    across the stage boundary; the shaped arm keeps its threshold.
    """
    if config.transfer is None:
        raise ConfigError("Config has no transfer section")
    settings = settings or load_settings()
    root = Path(output_dir or config.output_dir or settings.output_dir)

    stage1_config = replace(config, transfer=None)
    stage1 = run_experiment(stage1_config, root / "stage1", settings)
    for arm, result in stage1.results.items():
        for run in result.runs:
            if run.checkpoint is not None:
                save_checkpoint(run.checkpoint, root / "stage1" / "checkpoints" / arm / f"seed_{run.seed}")
    if config.transfer.budget <= 0:
        logger.info("stage-two budget is zero, keeping the stage-one result")
        return TransferOutcome(stage1=stage1, stage2=None, combined=stage1)

    stage2_config = stage_two_config(config)
    target_env = make_environment(stage2_config.environment, **stage2_config.environment_params)
    resume = {arm: transfer_checkpoint(result, target_env) for arm, result in stage1.results.items()}
    stage2 = _consume(ExperimentRunner(stage2_config, root / "stage2", settings, resume=resume))

    combined = ExperimentOutcome(config=config, output_dir=root)
    per_arm_rows = {}
    for arm, first in stage1.results.items():
        joined = _concatenate(first, stage2.results[arm])
        combined.results[arm] = joined
        combined.seed_paths[arm] = write_run_csvs(root, joined)
        per_arm_rows[arm] = aggregate_seed_files(arm, combined.seed_paths[arm])
        stats = RunStatistics.from_result(stage1.results[arm], label=f"{config.agent}/{arm}")
        stats.add(stage2.statistics[arm])
        combined.statistics[arm] = stats
    combined.aggregate_path = write_aggregate(root / "aggregate.csv", per_arm_rows)
    (root / "config.json").write_text(config.to_json() + "\n")
    combined.report_path = write_report(combined)
    return TransferOutcome(stage1=stage1, stage2=stage2, combined=combined)


def _comparison_lines(outcome: ExperimentOutcome) -> List[str]:
    sibre, baseline = outcome.results.get(SIBRE_ARM), outcome.results.get(BASELINE_ARM)
    if sibre is None or baseline is None:
        return []
    try:
        difference, p_value = compare_arms(sibre, baseline, outcome.config.final_window)
    except ConfigError:
        return []
    verdict = "n/a" if p_value is None else f"{p_value:.4g}"
    return ["", f"SIBRE minus baseline, final window: {difference:+.4f} (one-sided Welch p = {verdict}).", ""]


def build_report(outcome: ExperimentOutcome) -> str:
    config = outcome.config
    lines = [
        f"# {config.preset}: {config.agent} on {config.environment}",
        "",
        f"Config hash `{outcome.config.config_hash}`, seeds {list(config.seeds)}.",
        "",
        "| Arm | Final-window mean return | Std. error | Final rho |",
        "|-----|--------------------------|------------|-----------|",
    ]
    for arm, result in outcome.results.items():
        if not any(run.points for run in result.runs):
            lines.append(f"| {arm} | - | - | - |")
            continue
        row = summary_row("none", "", result, config.final_window)
        finals = [run.threshold.rho for run in result.runs if run.threshold is not None]
        final_rho = f"{sum(finals) / len(finals):.4f}" if finals else "-"
        lines.append(
            f"| {arm} | {float(row['mean_final_return']):.4f} | "
            f"{float(row['stderr_final_return']):.4f} | {final_rho} |"
        )
    lines.extend(_comparison_lines(outcome))
    for stats in outcome.statistics.values():
        lines.append(str(stats))
    return "\n".join(lines) + "\n"


def write_report(outcome: ExperimentOutcome) -> Path:
    return save_markdown_file(build_report(outcome), outcome.output_dir / "report.md")
