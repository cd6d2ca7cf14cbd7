"""
Synchronous n-step advantage actor-critic with softmax or Gaussian policies
"""

import logging
import time
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..mdp import Environment
from ..shaper import ThresholdState
from ..tinynet import (
    DenseNet,
    GradientSet,
    backward,
    clip_gradients,
    forward,
    make_optimizer_state,
    optimizer_step,
)
from .common import make_driver, next_episode_seed, sample_categorical, seed_streams
from .config import AgentConfig
from .results import AgentCheckpoint, CurveRecorder, RunResult, SeedRun

logger = logging.getLogger(__name__)

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class A2CLoss:
    total: float
    policy: float
    value: float
    entropy: float


def n_step_targets(rewards: Sequence[float], bootstrap: float, gamma: float) -> np.ndarray:
    """Discounted reward-to-go of a rollout, closed with `bootstrap` after the last step."""
    targets = np.zeros(len(rewards))
    running = bootstrap
    for t in reversed(range(len(rewards))):
        running = rewards[t] + gamma * running
        targets[t] = running
    return targets


def _gaussian_parts(policy_out: np.ndarray, width: int) -> Tuple[np.ndarray, np.ndarray]:
    return policy_out[:, :width], policy_out[:, width:]


def a2c_loss(
    policy_net: DenseNet,
    value_net: DenseNet,
    observations: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
    entropy_coefficient: float,
    value_coefficient: float,
    advantages: np.ndarray,
) -> A2CLoss:
    """
    mean(-log pi(a|s) * A) - c_H * mean(entropy) + c_V * mean((target - V)^2),
    with the advantages held constant.
    """
    values = forward(value_net, observations)[:, 0]
    policy_out = forward(policy_net, observations)
    if policy_net.head == "softmax":
        log_p = np.log(policy_out)
        chosen = log_p[np.arange(len(actions)), actions.astype(int)]
        entropy = -np.sum(policy_out * log_p, axis=1)
    else:
        width = policy_net.layer_dims[-1]
        mean, log_std = _gaussian_parts(policy_out, width)
        z = (actions.reshape(mean.shape) - mean) / np.exp(log_std)
        chosen = np.sum(-0.5 * z**2 - log_std - 0.5 * LOG_2PI, axis=1)
        entropy = np.sum(log_std + 0.5 * (LOG_2PI + 1.0), axis=1)

    policy_loss = -float(np.mean(chosen * advantages))
    value_loss = float(np.mean((targets - values) ** 2))
    mean_entropy = float(np.mean(entropy))
    total = policy_loss - entropy_coefficient * mean_entropy + value_coefficient * value_loss
    return A2CLoss(total=total, policy=policy_loss, value=value_loss, entropy=mean_entropy)


def a2c_loss_and_gradients(
    policy_net: DenseNet,
    value_net: DenseNet,
    observations: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
    entropy_coefficient: float,
    value_coefficient: float,
    advantages: Optional[np.ndarray] = None,
) -> Tuple[A2CLoss, GradientSet, GradientSet]:
    """Loss of `a2c_loss` plus its gradients for the policy and value networks."""
    observations = np.atleast_2d(observations)
    steps = observations.shape[0]
    values = forward(value_net, observations)[:, 0]
    if advantages is None:
        advantages = targets - values
    loss = a2c_loss(
        policy_net,
        value_net,
        observations,
        actions,
        targets,
        entropy_coefficient,
        value_coefficient,
        advantages,
    )

    policy_out = forward(policy_net, observations)
    if policy_net.head == "softmax":
        rows = np.arange(steps)
        idx = actions.astype(int)
        upstream = entropy_coefficient * (np.log(policy_out) + 1.0)
        upstream[rows, idx] -= advantages / policy_out[rows, idx]
    else:
        width = policy_net.layer_dims[-1]
        mean, log_std = _gaussian_parts(policy_out, width)
        z = (actions.reshape(mean.shape) - mean) / np.exp(log_std)
        adv = advantages[:, None]
        upstream = np.concatenate(
            [-adv * z / np.exp(log_std), -adv * (z**2 - 1.0) - entropy_coefficient], axis=1
        )
    policy_grads = backward(policy_net, observations, upstream / steps)

    value_upstream = (-2.0 * value_coefficient * (targets - values) / steps)[:, None]
    value_grads = backward(value_net, observations, value_upstream)
    return loss, policy_grads, value_grads


def build_networks(
    env: Environment, config: AgentConfig, rng: np.random.Generator
) -> Tuple[DenseNet, DenseNet]:
    hidden = list(config.hidden_dims)
    if env.action_spec.is_discrete:
        policy = DenseNet.create(
            [env.observation_dim, *hidden, env.action_spec.count],
            rng,
            activation=config.activation,
            head="softmax",
        )
    else:
        policy = DenseNet.create(
            [env.observation_dim, *hidden, env.action_spec.dim],
            rng,
            activation=config.activation,
            head="gaussian",
        )
    value = DenseNet.create([env.observation_dim, *hidden, 1], rng, activation=config.activation)
    return policy, value


def select_action(policy_net: DenseNet, observation: np.ndarray, rng: np.random.Generator):
    """Returns (raw action stored for the update, action sent to the environment)."""
    out = forward(policy_net, observation)
    if policy_net.head == "softmax":
        action = sample_categorical(out, rng)
        return action, action
    width = policy_net.layer_dims[-1]
    mean, log_std = out[:width], out[width:]
    return mean + np.exp(log_std) * rng.standard_normal(width), None


def _train_seed(
    env: Environment,
    config: AgentConfig,
    shaper: Optional[ThresholdState],
    seed: int,
    resume: Optional[AgentCheckpoint],
) -> SeedRun:
    started = time.perf_counter()
    env_rng, agent_rng = seed_streams(seed)
    if resume:
        policy_net = resume.networks["policy"].copy()
        value_net = resume.networks["value"].copy()
    else:
        policy_net, value_net = build_networks(env, config, agent_rng)
    policy_opt = make_optimizer_state(config.optimizer, policy_net)
    value_opt = make_optimizer_state(config.optimizer, value_net)
    driver = make_driver(shaper, resume)
    start_rho = None if driver is None else driver.rho

    frame_offset = resume.frames if resume else 0
    episode_offset = resume.episodes if resume else 0
    recorder = CurveRecorder(
        getattr(env, "continuing", False),
        config.report_window,
        resume.curve_points if resume else 0,
    )
    budget = config.training_budget
    spec = env.action_spec

    frames = episodes = 0
    obs = env.reset(next_episode_seed(env_rng)).encoding
    while not budget.exhausted(episodes, frames):
        observations: List[np.ndarray] = []
        actions: List = []
        rewards: List[float] = []
        outcome = None
        while len(rewards) < config.rollout_length and not budget.exhausted(episodes, frames):
            fraction = budget.fraction(episodes, frames)
            raw, env_action = select_action(policy_net, obs, agent_rng)
            if env_action is None:
                env_action = np.clip(raw, spec.low, spec.high)
            outcome = env.step(env_action)
            frames += 1

            reward = outcome.reward
            if driver is not None:
                reward = driver.shape(outcome, fraction).value
            observations.append(obs)
            actions.append(raw)
            rewards.append(reward)
            recorder.observe(outcome.reward, outcome.ends_episode, frame_offset + frames, driver)
            obs = outcome.next_observation.encoding
            if outcome.ends_episode:
                break

        if outcome.terminal:
            bootstrap = 0.0
        else:
            bootstrap = float(forward(value_net, obs)[0])
        targets = n_step_targets(rewards, bootstrap, config.gamma)
        _, policy_grads, value_grads = a2c_loss_and_gradients(
            policy_net,
            value_net,
            np.array(observations),
            np.array(actions),
            targets,
            config.entropy_coefficient,
            config.value_coefficient,
        )
        optimizer_step(
            policy_net, clip_gradients(policy_grads, config.max_grad_norm), policy_opt, config.learning_rate
        )
        optimizer_step(
            value_net, clip_gradients(value_grads, config.max_grad_norm), value_opt, config.learning_rate
        )

        if outcome.ends_episode:
            episodes += 1
            if episodes % config.log_every == 0:
                logger.debug(
                    "seed %d episode %d (frame %d): last return %.3f",
                    seed,
                    episodes,
                    frames,
                    recorder.points[-1].ret,
                )
            obs = env.reset(next_episode_seed(env_rng)).encoding

    checkpoint = AgentCheckpoint(
        agent="a2c",
        networks={"policy": policy_net.copy(), "value": value_net.copy()},
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


def train_a2c(
    env: Environment,
    config: AgentConfig,
    shaper: Optional[ThresholdState] = None,
    seeds: Sequence[int] = (0,),
    resume: Optional[Mapping[int, AgentCheckpoint]] = None,
) -> RunResult:
    result = RunResult(agent="a2c", arm="sibre" if shaper is not None else "baseline")
    for seed in seeds:
        run = _train_seed(env, config, shaper, seed, (resume or {}).get(seed))
        logger.info(
            "a2c %s seed %d: %d frames, %d episodes", result.arm, seed, run.frames, run.episodes
        )
        result.runs.append(run)
    return result
