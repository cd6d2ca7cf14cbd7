"""
Learning-curve figures rendered from aggregate CSVs
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .curves import parse_float, read_aggregate  # noqa: E402

logger = logging.getLogger(__name__)

FIGURE_STYLE = {
    "axes": dict(labelsize=9, titlesize=10, linewidth=0.6),
    "figure": dict(figsize=[6.0, 3.75], facecolor="white"),
    "font": {"family": "DejaVu Sans", "size": 9},
    "legend": dict(fontsize=8, frameon=False),
    "lines": dict(linewidth=1.2),
    "svg": dict(hashsalt="sibre", fonttype="none"),
}
ARM_COLOURS = {"sibre": "tab:blue", "baseline": "tab:orange"}


def trailing_mean(values: np.ndarray, window: int) -> np.ndarray:
    """Mean over the last `window` points including the current one (fewer at the start)."""
    values = np.asarray(values, dtype=float)
    if window <= 1 or values.size == 0:
        return values
    cumulative = np.concatenate([[0.0], np.cumsum(values)])
    idx = np.arange(1, values.size + 1)
    start = np.maximum(idx - window, 0)
    return (cumulative[idx] - cumulative[start]) / (idx - start)


def _column(rows: List[dict], name: str) -> Optional[np.ndarray]:
    values = [parse_float(row[name]) for row in rows]
    if any(v is None for v in values):
        return None
    return np.array(values)


def plot_aggregate(
    aggregate_path: Union[str, Path],
    output_path: Optional[Union[str, Path]] = None,
    smoothing_window: int = 100,
    title: Optional[str] = None,
) -> Path:
    """
    One figure per aggregate: mean return per arm with a standard-error band
    and, where the arm has one, its mean threshold as a dotted black line.
    """
    aggregate_path = Path(aggregate_path)
    per_arm = read_aggregate(aggregate_path)
    output_path = Path(output_path or aggregate_path.with_suffix(".svg"))

    with matplotlib.rc_context():
        for group, settings in FIGURE_STYLE.items():
            matplotlib.rc(group, **settings)
        fig, ax = plt.subplots()
        for arm in sorted(per_arm):
            rows = per_arm[arm]
            index = np.array([int(row["index"]) for row in rows])
            mean = trailing_mean(_column(rows, "mean_return"), smoothing_window)
            stderr = trailing_mean(_column(rows, "stderr_return"), smoothing_window)
            colour = ARM_COLOURS.get(arm)
            ax.plot(index, mean, color=colour, label=arm)
            ax.fill_between(index, mean - stderr, mean + stderr, color=colour, alpha=0.25, linewidth=0)
            rho = _column(rows, "mean_rho")
            if rho is not None:
                ax.plot(index, rho, color="black", linestyle=":", label=f"{arm} threshold")
        ax.set_xlabel("episode or window")
        ax.set_ylabel(f"return (trailing mean over {smoothing_window})")
        ax.set_title(title or aggregate_path.parent.name)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        fig.tight_layout()
        output_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(
            output_path,
            format="svg",
            metadata={
                "Date": None,
                "Title": title or aggregate_path.parent.name,
                "Description": f"smoothing: trailing mean over {smoothing_window} points",
            },
        )
        plt.close(fig)
    logger.info("wrote %s", output_path)
    return output_path


def emit_plots(
    aggregate_paths: Sequence[Union[str, Path]],
    smoothing_window: int = 100,
    output_dir: Optional[Union[str, Path]] = None,
) -> List[Path]:
    figures = []
    for path in aggregate_paths:
        path = Path(path)
        target = None
        if output_dir is not None:
            target = Path(output_dir) / f"{path.parent.name}_{path.stem}.svg"
        figures.append(plot_aggregate(path, target, smoothing_window))
    return figures

