"""
Monte-Carlo check of the threshold recursion against the optimal return
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Tuple, Union

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)

ReturnSampler = Callable[[np.random.Generator, Tuple[int, ...]], np.ndarray]

BELOW, ABOVE, AT = 1, 2, 3


def bernoulli_return_sampler(success_probability: float, reward: float = 1.0) -> ReturnSampler:
    """Returns `reward` with the given probability, else zero."""
    if not 0.0 <= success_probability <= 1.0:
        raise ValueError("success_probability must lie in [0, 1]")

    def sample(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
        return reward * (rng.random(shape) < success_probability)

    return sample


def constant_return_sampler(value: float) -> ReturnSampler:
    def sample(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
        return np.full(shape, float(value))

    return sample


@dataclass
class DynamicsReport:
    case: int
    rho_star: float
    beta: float
    confidence: float
    mean_rho: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    mean_increment: np.ndarray
    increment_low: np.ndarray
    increment_high: np.ndarray
    verdicts: Dict[str, bool] = field(default_factory=dict)
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    @property
    def num_updates(self) -> int:
        return len(self.mean_rho) - 1

    def to_rows(self):
        yield ["update_index", "mean_rho", "ci_low", "ci_high"]
        for t in range(len(self.mean_rho)):
            yield [t, repr(float(self.mean_rho[t])), repr(float(self.ci_low[t])), repr(float(self.ci_high[t]))]

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            csv.writer(handle, lineterminator="\n").writerows(self.to_rows())
        return path


def _intervals(samples: np.ndarray, alpha: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two-sided t-intervals per column of a trials x time matrix."""
    n = samples.shape[0]
    mean = samples.mean(axis=0)
    stderr = samples.std(axis=0, ddof=1) / np.sqrt(n)
    half = stats.t.ppf(1.0 - alpha / 2.0, df=n - 1) * stderr
    return mean, mean - half, mean + half


def classify_case(rho0: float, rho_star: float, atol: float = 1e-12) -> int:
    if abs(rho0 - rho_star) <= atol:
        return AT
    return BELOW if rho0 < rho_star else ABOVE


def verify_threshold_dynamics(
    return_sampler: ReturnSampler,
    rho0: float,
    beta: float,
    num_updates: int,
    num_trials: int,
    rho_star: float,
    rng: np.random.Generator,
    confidence: float = 0.99,
    episodes_per_update: int = 1,
) -> DynamicsReport:
    """
    Simulate rho_{t+1} = rho_t + beta * (mean of x sampled returns - rho_t) over
    independent trials and test the expected trajectory:

    - rho0 below rho_star: strictly increasing and staying below rho_star
    - rho0 above rho_star: strictly decreasing and staying above rho_star
    - rho0 at rho_star: no significant change at any update

    Confidence intervals are Bonferroni-corrected across updates.
    """
    if num_trials < 2:
        raise ValueError("Need at least two trials for confidence intervals")
    if num_updates < 1 or episodes_per_update < 1:
        raise ValueError("num_updates and episodes_per_update must be at least 1")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")

    trajectory = np.empty((num_trials, num_updates + 1))
    trajectory[:, 0] = rho0
    rho = np.full(num_trials, float(rho0))
    sample_variance = 0.0
    for t in range(num_updates):
        returns = np.asarray(return_sampler(rng, (num_trials, episodes_per_update)), dtype=float)
        sample_variance = max(sample_variance, float(np.var(returns)))
        rho = rho + beta * (returns.mean(axis=1) - rho)
        trajectory[:, t + 1] = rho

    alpha = (1.0 - confidence) / num_updates
    mean_rho, ci_low, ci_high = _intervals(trajectory, alpha)
    increments = np.diff(trajectory, axis=1)
    mean_inc, inc_low, inc_high = _intervals(increments, alpha)

    case = classify_case(rho0, rho_star)
    degenerate = sample_variance == 0.0 and case == AT
    if case == BELOW:
        verdicts = {
            "increasing": bool(np.all(inc_low > 0.0)),
            "below_rho_star": bool(np.all(ci_high < rho_star)),
        }
    elif case == ABOVE:
        verdicts = {
            "decreasing": bool(np.all(inc_high < 0.0)),
            "above_rho_star": bool(np.all(ci_low > rho_star)),
        }
    else:
        verdicts = {"stationary": degenerate or bool(np.all((inc_low <= 0.0) & (inc_high >= 0.0)))}

    logger.info(
        "threshold dynamics case %d (rho0=%.4f, rho*=%.4f, beta=%.4f): %s",
        case,
        rho0,
        rho_star,
        beta,
        verdicts,
    )
    return DynamicsReport(
        case=case,
        rho_star=rho_star,
        beta=beta,
        confidence=confidence,
        mean_rho=mean_rho,
        ci_low=ci_low,
        ci_high=ci_high,
        mean_increment=mean_inc,
        increment_low=inc_low,
        increment_high=inc_high,
        verdicts=verdicts,
        degenerate=degenerate,
    )
