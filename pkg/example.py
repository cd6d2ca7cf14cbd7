from sibre.agents import AgentConfig, train_tabular_q
from sibre.environments import FrozenLake
from sibre.oracle import episodic_rho_star, policy_equivalence_check, value_iteration
from sibre.shaper import BetaSchedule, ThresholdState


def main():
    env = FrozenLake()
    config = AgentConfig(budget=2000)
    shaper = ThresholdState.create(BetaSchedule.linear_staircase(0.001, 0.1, 10))

    # Train both arms on the same seeds
    shaped = train_tabular_q(env, config, shaper, seeds=(0, 1, 2))
    vanilla = train_tabular_q(env, config, seeds=(0, 1, 2))

    target = episodic_rho_star(env, horizon=env.turn_limit)
    print(f"Optimal success rate within the turn limit: {target:.3f}")
    for result in (shaped, vanilla):
        final = result.curve_matrix()[:, -500:].mean()
        print(f"{result.arm:>8}: mean return over the last 500 episodes {final:.3f}")

    # Compare the greedy policy of one shaped run with the oracle
    oracle = value_iteration(env, gamma=0.99)
    learned = shaped.runs[0].qtable.greedy_policy()
    report = policy_equivalence_check(env, learned, oracle, method="exact")
    print(f"Value gap {report.value_gap:.1%}, action agreement {report.agreement:.1%}")
    print(f"Final threshold {shaped.runs[0].threshold.rho:.3f}")


if __name__ == "__main__":
    main()
