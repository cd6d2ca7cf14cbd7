"""
Compare a learned tabular policy with the value-iteration optimum
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from ..mdp import Environment, TabularModel
from .rollout import monte_carlo_policy_value
from .value_iteration import TIE_TOLERANCE, OracleSolution, as_model, evaluate_policy

logger = logging.getLogger(__name__)

EXACT, MONTE_CARLO = "exact", "monte_carlo"


@dataclass
class PolicyCheckReport:
    learned_value: float
    rho_star: float
    value_gap: float
    agreement: float
    reachable_states: List[int]
    disagreeing_states: List[int]
    tolerance: float
    method: str
    stderr: float = 0.0

    @property
    def flagged(self) -> bool:
        return self.value_gap > self.tolerance

    @property
    def within_tolerance(self) -> bool:
        return not self.flagged


def reachable_under(model: TabularModel, policy: np.ndarray) -> List[int]:
    """Non-terminal states reachable from the start state with positive probability under `policy`."""
    seen = {model.start_state}
    queue = deque([model.start_state])
    while queue:
        s = queue.popleft()
        if s in model.terminal_states:
            continue
        for p, s_next, _, done in model.transitions[s][int(policy[s])]:
            if p > 0 and not done and s_next not in seen:
                seen.add(s_next)
                queue.append(s_next)
    return sorted(s for s in seen if s not in model.terminal_states)


def policy_equivalence_check(
    model_or_env: Union[TabularModel, Environment],
    learned_policy: np.ndarray,
    oracle_solution: OracleSolution,
    method: str = MONTE_CARLO,
    tolerance: float = 0.1,
    num_episodes: int = 100_000,
    rng: Optional[np.random.Generator] = None,
    horizon: int = 1000,
) -> PolicyCheckReport:
    """
    value_gap is the shortfall of the learned policy's start-state value
    relative to rho_star, both under the oracle's discount. A learned action
    agrees when its optimal Q-value ties the best action's.
    """
    model = as_model(model_or_env)
    learned_policy = np.asarray(learned_policy, dtype=int)
    gamma = oracle_solution.gamma

    stderr = 0.0
    if method == EXACT:
        exact_horizon = None if gamma < 1.0 else horizon
        values = evaluate_policy(model, learned_policy, gamma, horizon=exact_horizon)
        learned_value = float(values[model.start_state])
    elif method == MONTE_CARLO:
        estimate = monte_carlo_policy_value(
            model,
            learned_policy,
            num_episodes,
            rng if rng is not None else np.random.default_rng(0),
            gamma=gamma,
            horizon=horizon,
        )
        learned_value, stderr = estimate.mean, estimate.stderr
    else:
        raise ValueError(f"Unknown evaluation method {method!r}")

    rho_star = oracle_solution.rho_star
    scale = abs(rho_star) if rho_star != 0 else 1.0
    value_gap = max(0.0, (rho_star - learned_value) / scale)

    reachable = reachable_under(model, oracle_solution.optimal_policy)
    q = oracle_solution.q_values
    disagreeing = [
        s for s in reachable if q[s, learned_policy[s]] < q[s].max() - TIE_TOLERANCE
    ]
    agreement = 1.0 - len(disagreeing) / len(reachable) if reachable else 1.0

    report = PolicyCheckReport(
        learned_value=learned_value,
        rho_star=rho_star,
        value_gap=value_gap,
        agreement=agreement,
        reachable_states=reachable,
        disagreeing_states=disagreeing,
        tolerance=tolerance,
        method=method,
        stderr=stderr,
    )
    if report.flagged:
        logger.warning(
            "learned policy value %.4f is %.1f%% below rho* %.4f",
            learned_value,
            100 * value_gap,
            rho_star,
        )
    return report
