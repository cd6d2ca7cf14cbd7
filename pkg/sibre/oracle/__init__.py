from .dynamics import (
    ABOVE,
    AT,
    BELOW,
    DynamicsReport,
    bernoulli_return_sampler,
    classify_case,
    constant_return_sampler,
    verify_threshold_dynamics,
)
from .gridsearch import breadth_first_solve, scripted_return
from .policy_check import PolicyCheckReport, policy_equivalence_check, reachable_under
from .rollout import MonteCarloEstimate, monte_carlo_policy_value
from .value_iteration import (
    OracleSolution,
    as_model,
    bellman_backup,
    episodic_rho_star,
    evaluate_policy,
    greedy_actions,
    value_iteration,
)
