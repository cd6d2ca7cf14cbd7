"""
DQN with uniform replay and a periodically copied target network
"""

import logging
import time
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import UnsupportedEnvironmentError
from ..mdp import Environment
from ..shaper import ThresholdState
from ..tinynet import DenseNet, GradientSet, backward, forward, make_optimizer_state, optimizer_step
from .common import explore_or_exploit, make_driver, next_episode_seed, seed_streams
from .config import AgentConfig
from .replay import ReplayBatch, ReplayBuffer
from .results import AgentCheckpoint, CurveRecorder, RunResult, SeedRun

logger = logging.getLogger(__name__)


def td_targets(target_net: DenseNet, batch: ReplayBatch, gamma: float) -> np.ndarray:
    """r + gamma * max_a Q_target(s', a), with no bootstrap on terminal tuples."""
    next_values = forward(target_net, batch.next_observations).max(axis=1)
    return batch.rewards + gamma * np.where(batch.terminals, 0.0, next_values)


def dqn_loss_gradients(
    net: DenseNet, target_net: DenseNet, batch: ReplayBatch, gamma: float
) -> Tuple[float, GradientSet]:
    """Mean-squared TD error 0.5 * mean((Q(s,a) - y)^2) and its parameter gradients."""
    targets = td_targets(target_net, batch, gamma)
    rows = np.arange(len(batch))
    q_values = forward(net, batch.observations)
    errors = q_values[rows, batch.actions] - targets
    upstream = np.zeros_like(q_values)
    upstream[rows, batch.actions] = errors / len(batch)
    return 0.5 * float(np.mean(errors**2)), backward(net, batch.observations, upstream)


def _q_network(env: Environment, config: AgentConfig, rng: np.random.Generator) -> DenseNet:
    dims = [env.observation_dim, *config.hidden_dims, env.action_spec.count]
    return DenseNet.create(dims, rng, activation=config.activation)


def _train_seed(
    env: Environment,
    config: AgentConfig,
    shaper: Optional[ThresholdState],
    seed: int,
    resume: Optional[AgentCheckpoint],
) -> SeedRun:
    started = time.perf_counter()
    env_rng, agent_rng = seed_streams(seed)
    net = resume.networks["q"].copy() if resume else _q_network(env, config, agent_rng)
    target_net = net.copy()
    optimizer = make_optimizer_state(config.optimizer, net)
    buffer = ReplayBuffer.create(config.replay_capacity, env.observation_dim)
    driver = make_driver(shaper, resume)
    start_rho = None if driver is None else driver.rho

    frame_offset = resume.frames if resume else 0
    episode_offset = resume.episodes if resume else 0
    continuing = getattr(env, "continuing", False)
    recorder = CurveRecorder(
        continuing, config.report_window, resume.curve_points if resume else 0
    )
    schedule = config.epsilon_schedule
    budget = config.training_budget

    frames = episodes = 0
    obs = env.reset(next_episode_seed(env_rng)).encoding
    while not budget.exhausted(episodes, frames):
        fraction = budget.fraction(episodes, frames)
        epsilon = schedule.value_at(frame_offset + frames, episode_offset + episodes)
        action = explore_or_exploit(forward(net, obs), epsilon, agent_rng)
        outcome = env.step(action)
        frames += 1

        reward = outcome.reward
        if driver is not None:
            reward = driver.shape(outcome, fraction).value
        next_obs = outcome.next_observation.encoding
        buffer.add(obs, action, reward, next_obs, outcome.terminal)

        if (
            frames >= config.learning_starts
            and frames % config.train_every == 0
            and len(buffer) >= config.batch_size
        ):
            batch = buffer.sample(config.batch_size, agent_rng)
            _, grads = dqn_loss_gradients(net, target_net, batch, config.gamma)
            optimizer_step(net, grads, optimizer, config.learning_rate)
        if frames % config.target_update_period == 0:
            target_net.load_from(net)

        closed = recorder.observe(
            outcome.reward, outcome.ends_episode, frame_offset + frames, driver, epsilon
        )
        if closed and len(recorder.points) % config.log_every == 0:
            logger.debug(
                "seed %d frame %d: last return %.3f, epsilon %.4f",
                seed,
                frames,
                recorder.points[-1].ret,
                epsilon,
            )
        if outcome.ends_episode:
            episodes += 1
            obs = env.reset(next_episode_seed(env_rng)).encoding
        else:
            obs = next_obs

    checkpoint = AgentCheckpoint(
        agent="dqn",
        networks={"q": net.copy()},
        observation_dim=env.observation_dim,
        action_spec=env.action_spec,
        threshold=None if driver is None else driver.state,
        frames=frame_offset + frames,
        episodes=episode_offset + episodes,
        curve_points=recorder.next_index,
    )
    return SeedRun(
        seed=seed,
        points=recorder.points,
        frames=frames,
        episodes=episodes,
        wall_clock=time.perf_counter() - started,
        threshold=checkpoint.threshold,
        start_rho=start_rho,
        checkpoint=checkpoint,
    )


def train_dqn(
    env: Environment,
    config: AgentConfig,
    shaper: Optional[ThresholdState] = None,
    seeds: Sequence[int] = (0,),
    resume: Optional[Mapping[int, AgentCheckpoint]] = None,
) -> RunResult:
    if not env.action_spec.is_discrete:
        raise UnsupportedEnvironmentError(
            f"DQN needs a discrete action space, {env.env_id} is continuous"
        )
    result = RunResult(agent="dqn", arm="sibre" if shaper is not None else "baseline")
    for seed in seeds:
        run = _train_seed(env, config, shaper, seed, (resume or {}).get(seed))
        logger.info(
            "dqn %s seed %d: %d frames, %d curve points", result.arm, seed, run.frames, len(run.points)
        )
        result.runs.append(run)
    return result
