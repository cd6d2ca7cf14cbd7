"""
Value iteration and exact policy evaluation over an explicit tabular model
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..errors import UnsupportedEnvironmentError
from ..mdp import Environment, TabularModel

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


@dataclass
class OracleSolution:
    optimal_values: np.ndarray
    optimal_policy: np.ndarray
    rho_star: float
    q_values: np.ndarray
    gamma: float
    iterations: int


def as_model(model_or_env: Union[TabularModel, Environment]) -> TabularModel:
    if isinstance(model_or_env, TabularModel):
        return model_or_env
    if isinstance(model_or_env, Environment) and model_or_env.is_tabular:
        try:
            return model_or_env.transition_model()
        except NotImplementedError:
            pass
    raise UnsupportedEnvironmentError(
        f"{getattr(model_or_env, 'env_id', type(model_or_env).__name__)} "
        "has no explicit tabular transition model"
    )


def greedy_actions(q_values: np.ndarray, tie_tolerance: float = TIE_TOLERANCE) -> np.ndarray:
    """Argmax per row; actions within tie_tolerance of the best resolve to the lowest index."""
    best = q_values.max(axis=1, keepdims=True)
    return np.argmax(q_values >= best - tie_tolerance, axis=1)


def bellman_backup(
    model: TabularModel, values: np.ndarray, gamma: float
) -> np.ndarray:
    return model.expected_rewards() + gamma * model.continuation_matrix() @ values


def value_iteration(
    model_or_env: Union[TabularModel, Environment],
    gamma: float = 0.99,
    tolerance: float = 1e-10,
    max_iterations: int = 1_000_000,
) -> OracleSolution:
    """
    Iterate V <- max_a [R + gamma * P V] until the sup-norm change is within
    `tolerance`. Terminal states keep value zero.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    model = as_model(model_or_env)
    rewards = model.expected_rewards()
    continuation = model.continuation_matrix()

    values = np.zeros(model.num_states)
    for iteration in range(1, max_iterations + 1):
        q_values = rewards + gamma * continuation @ values
        updated = q_values.max(axis=1)
        residual = float(np.max(np.abs(updated - values)))
        values = updated
        if residual <= tolerance:
            break
    else:
        logger.warning(
            "value iteration stopped after %d sweeps with residual %.3e", max_iterations, residual
        )

    q_values = rewards + gamma * continuation @ values
    logger.debug("value iteration converged in %d sweeps", iteration)
    return OracleSolution(
        optimal_values=values,
        optimal_policy=greedy_actions(q_values),
        rho_star=float(values[model.start_state]),
        q_values=q_values,
        gamma=gamma,
        iterations=iteration,
    )


def evaluate_policy(
    model_or_env: Union[TabularModel, Environment],
    policy: np.ndarray,
    gamma: float = 1.0,
    horizon: Optional[int] = None,
) -> np.ndarray:
    """
    V^pi for a deterministic policy. Without a horizon the linear system
    (I - gamma P_pi) V = R_pi is solved directly; with one, `horizon`
    backups are applied from zero.
    """
    model = as_model(model_or_env)
    policy = np.asarray(policy, dtype=int)
    states = np.arange(model.num_states)
    rewards = model.expected_rewards()[states, policy]
    continuation = model.continuation_matrix()[states, policy]

    if horizon is not None:
        values = np.zeros(model.num_states)
        for _ in range(horizon):
            values = rewards + gamma * continuation @ values
        return values
    try:
        return np.linalg.solve(np.eye(model.num_states) - gamma * continuation, rewards)
    except np.linalg.LinAlgError as e:
        raise ValueError(
            "Policy value is unbounded; pass a horizon or a discount below one"
        ) from e


def episodic_rho_star(
    model_or_env: Union[TabularModel, Environment],
    horizon: int,
    gamma: float = 0.99,
) -> float:
    """Expected undiscounted return from the start state of pi* cut off after `horizon` steps."""
    model = as_model(model_or_env)
    solution = value_iteration(model, gamma)
    values = evaluate_policy(model, solution.optimal_policy, gamma=1.0, horizon=horizon)
    return float(values[model.start_state])
