"""
Per-seed curve CSVs, cross-seed aggregates and sweep summaries
"""

import csv
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from ..agents import RunResult, SeedRun
from ..errors import ConfigError

SEED_COLUMNS = ["seed", "episode_or_window", "return", "rho", "beta", "epsilon", "steps"]
AGGREGATE_COLUMNS = ["arm", "index", "mean_return", "stderr_return", "mean_rho", "mean_beta", "num_seeds"]
SUMMARY_COLUMNS = [
    "axis",
    "value",
    "arm",
    "mean_final_return",
    "stderr_final_return",
    "mean_return",
    "stderr_mean_return",
]

PathLike = Union[str, Path]


def format_float(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return repr(float(value))


def parse_float(text: str) -> Optional[float]:
    return float(text) if text != "" else None


def write_csv(path: PathLike, fieldnames: List[str], rows: Iterable[dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})
    return path


def read_csv(path: PathLike, required: Sequence[str] = ()) -> List[dict]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{path} does not exist")
    with path.open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise ConfigError(f"{path} is missing columns {missing}")
        return list(reader)


def seed_rows(run: SeedRun) -> List[dict]:
    return [
        {
            "seed": run.seed,
            "episode_or_window": p.index,
            "return": format_float(p.ret),
            "rho": format_float(p.rho),
            "beta": format_float(p.beta),
            "epsilon": format_float(p.epsilon),
            "steps": p.steps,
        }
        for p in run.points
    ]


def seed_csv_path(directory: PathLike, arm: str, seed: int) -> Path:
    return Path(directory) / arm / f"seed_{seed}.csv"


def write_run_csvs(directory: PathLike, result: RunResult) -> List[Path]:
    return [
        write_csv(seed_csv_path(directory, result.arm, run.seed), SEED_COLUMNS, seed_rows(run))
        for run in result.runs
    ]


def _mean_and_stderr(values: np.ndarray):
    n = len(values)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return mean, stderr


def aggregate_seed_files(arm: str, paths: Sequence[PathLike]) -> List[dict]:
    """Mean and standard error per curve index over the seeds that reached it."""
    curves = [read_csv(p, SEED_COLUMNS) for p in paths]
    length = max((len(c) for c in curves), default=0)
    rows = []
    for index in range(length):
        entries = [c[index] for c in curves if index < len(c)]
        returns = np.array([float(e["return"]) for e in entries])
        rhos = [parse_float(e["rho"]) for e in entries]
        betas = [parse_float(e["beta"]) for e in entries]
        mean_return, stderr_return = _mean_and_stderr(returns)
        rows.append(
            {
                "arm": arm,
                "index": entries[0]["episode_or_window"],
                "mean_return": format_float(mean_return),
                "stderr_return": format_float(stderr_return),
                "mean_rho": format_float(None if None in rhos else float(np.mean(rhos))),
                "mean_beta": format_float(None if None in betas else float(np.mean(betas))),
                "num_seeds": len(entries),
            }
        )
    return rows


def write_aggregate(path: PathLike, per_arm_rows: Dict[str, List[dict]]) -> Path:
    rows = [row for arm in sorted(per_arm_rows) for row in per_arm_rows[arm]]
    return write_csv(path, AGGREGATE_COLUMNS, rows)


def read_aggregate(path: PathLike) -> Dict[str, List[dict]]:
    per_arm: Dict[str, List[dict]] = {}
    for row in read_csv(path, AGGREGATE_COLUMNS):
        per_arm.setdefault(row["arm"], []).append(row)
    return per_arm


def final_window_size(num_points: int, final_window: Optional[int]) -> int:
    if final_window is not None:
        return max(1, min(final_window, num_points))
    return max(1, num_points // 10)


def final_returns(result: RunResult, final_window: Optional[int]) -> np.ndarray:
    """Per-seed mean return over the last points of each curve."""
    finals = []
    for run in result.runs:
        returns = run.returns
        if len(returns):
            finals.append(np.mean(returns[-final_window_size(len(returns), final_window):]))
    return np.array(finals)


def compare_arms(
    treatment: RunResult, control: RunResult, final_window: Optional[int]
) -> Tuple[float, Optional[float]]:
    """
    Difference of the final-window means and the one-sided Welch p-value for
    the treatment arm being greater. The p-value is None with fewer than two
    seeds per arm, or when neither arm varies across seeds.
    """
    a, b = final_returns(treatment, final_window), final_returns(control, final_window)
    if len(a) == 0 or len(b) == 0:
        raise ConfigError("Both arms need learning-curve points to be compared")
    difference = float(np.mean(a) - np.mean(b))
    if len(a) < 2 or len(b) < 2 or (np.ptp(a) == 0 and np.ptp(b) == 0):
        return difference, None
    result = stats.ttest_ind(a, b, equal_var=False, alternative="greater")
    return difference, float(result.pvalue)


def summary_row(
    axis: str, value, result: RunResult, final_window: Optional[int]
) -> dict:
    finals = final_returns(result, final_window)
    overall = [np.mean(run.returns) for run in result.runs if len(run.points)]
    if len(finals) == 0:
        raise ConfigError(f"No learning-curve points for {result.arm} at {axis}={value}")
    mean_final, stderr_final = _mean_and_stderr(finals)
    mean_all, stderr_all = _mean_and_stderr(np.array(overall))
    return {
        "axis": axis,
        "value": value,
        "arm": result.arm,
        "mean_final_return": format_float(mean_final),
        "stderr_final_return": format_float(stderr_final),
        "mean_return": format_float(mean_all),
        "stderr_mean_return": format_float(stderr_all),
    }
