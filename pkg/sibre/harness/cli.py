"""
Command-line entry point: run, sweep, transfer, verify-theorem and plot
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from ..environments import FrozenLake
from ..errors import ConfigError, SibreError
from ..oracle import bernoulli_return_sampler, episodic_rho_star, verify_threshold_dynamics
from ..tools import create_pdf_file
from .config import load_config, parse_seeds
from .initialization import load_settings
from .plots import emit_plots
from .runner import ExperimentOutcome, run_experiment, run_sweep, run_transfer

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED_VERDICT, EXIT_ERROR = 0, 1, 2


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--preset", help="named preset, applied under --config")
    parser.add_argument("--seeds", type=parse_seeds, help="e.g. 0-9 or 0,3,7")
    parser.add_argument("--out", help="output directory")
    parser.add_argument(
        "--paper-scale",
        "--full-scale",
        dest="full_scale",
        action="store_true",
        help="use the full frame budgets",
    )
    parser.add_argument("--pdf", action="store_true", help="also render report.pdf")
    parser.add_argument("--no-plots", action="store_true")


class SibreArgumentParser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they share the JSON error line."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = SibreArgumentParser(
        prog="sibre", description="Self-improvement reward shaping experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_experiment_flags(sub.add_parser("run", help="train every arm of a config"))

    sweep = sub.add_parser("sweep", help="repeat a config over beta values or learning rates")
    _add_experiment_flags(sweep)
    sweep.add_argument("--axis", choices=["beta_values", "learning_rates"])
    sweep.add_argument("--values", help="comma-separated; 'schedule' keeps the preset beta schedule")

    _add_experiment_flags(sub.add_parser("transfer", help="two-stage transfer run"))

    verify = sub.add_parser("verify-theorem", help="check threshold dynamics on FrozenLake")
    verify.add_argument("--trials", type=int, default=10_000)
    verify.add_argument("--updates", type=int, default=50)
    verify.add_argument("--beta", type=float, default=0.02)
    verify.add_argument("--confidence", type=float, default=0.99)
    verify.add_argument("--episodes-per-update", type=int, default=1)
    verify.add_argument("--turn-limit", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", help="output directory")

    plot = sub.add_parser("plot", help="render figures from aggregate CSVs")
    plot.add_argument("aggregates", nargs="*", help="aggregate CSV files")
    plot.add_argument("--out", help="directory searched for aggregate.csv files")
    plot.add_argument("--smoothing", type=int, default=100)
    plot.add_argument("--pdf", action="store_true", help="render report.md next to each aggregate")
    return parser


def _parse_values(text: Optional[str]) -> Optional[List]:
    if text is None:
        return None
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(float(item))
        except ValueError:
            values.append(item)
    return values


def _finish(outcome: ExperimentOutcome, args: argparse.Namespace) -> None:
    if not args.no_plots and outcome.aggregate_path is not None:
        emit_plots([outcome.aggregate_path], outcome.config.smoothing_window)
    if args.pdf and outcome.report_path is not None:
        _write_pdf(outcome.report_path)
    print(json.dumps({"output_dir": str(outcome.output_dir), "config_hash": outcome.config.config_hash}))


def _write_pdf(report_path: Path) -> Path:
    pdf_path = report_path.with_suffix(".pdf")
    buffer = create_pdf_file(report_path.read_text(encoding="utf-8"), base_url=str(report_path.parent))
    pdf_path.write_bytes(buffer.getvalue())
    return pdf_path


def _load(args: argparse.Namespace):
    if args.config is None and args.preset is None:
        raise ConfigError("Give --config, --preset or both")
    return load_config(args.config, args.preset, args.seeds, args.out, args.full_scale)


def cmd_run(args: argparse.Namespace) -> int:
    _finish(run_experiment(_load(args)), args)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    outcome = run_sweep(config, args.axis, _parse_values(args.values))
    for experiment in outcome.outcomes:
        _finish(experiment, args)
    print(json.dumps({"summary": str(outcome.summary_path)}))
    return EXIT_OK


def cmd_transfer(args: argparse.Namespace) -> int:
    _finish(run_transfer(_load(args)).combined, args)
    return EXIT_OK


def cmd_verify_theorem(args: argparse.Namespace) -> int:
    env = FrozenLake(turn_limit=args.turn_limit)
    rho_star = episodic_rho_star(env, horizon=args.turn_limit)
    sampler = bernoulli_return_sampler(rho_star)
    out = Path(args.out or load_settings().output_dir) / "theorem"
    rng = np.random.default_rng(args.seed)

    verdicts = {}
    for label, rho0 in (("below", 0.0), ("above", 1.0), ("at", rho_star)):
        report = verify_threshold_dynamics(
            sampler,
            rho0=rho0,
            beta=args.beta,
            num_updates=args.updates,
            num_trials=args.trials,
            rho_star=rho_star,
            rng=rng,
            confidence=args.confidence,
            episodes_per_update=args.episodes_per_update,
        )
        report.write_csv(out / f"dynamics_case{report.case}.csv")
        verdicts[label] = {"case": report.case, "passed": report.passed, **report.verdicts}

    print(json.dumps({"rho_star": rho_star, "verdicts": verdicts}, sort_keys=True))
    return EXIT_OK if all(v["passed"] for v in verdicts.values()) else EXIT_FAILED_VERDICT


def cmd_plot(args: argparse.Namespace) -> int:
    paths = [Path(p) for p in args.aggregates]
    if args.out:
        paths.extend(sorted(Path(args.out).rglob("aggregate.csv")))
    if not paths:
        raise ConfigError("No aggregate CSVs given or found")
    figures = emit_plots(paths, args.smoothing)
    if args.pdf:
        for path in paths:
            report = path.parent / "report.md"
            if report.exists():
                _write_pdf(report)
    print(json.dumps({"figures": [str(f) for f in figures]}))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "transfer": cmd_transfer,
    "verify-theorem": cmd_verify_theorem,
    "plot": cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = load_settings()
        logging.basicConfig(
            level=getattr(logging, settings.log_level, logging.INFO),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        return COMMANDS[args.command](args)
    except SibreError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return EXIT_ERROR
