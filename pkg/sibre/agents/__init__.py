from .a2c import (
    A2CLoss,
    a2c_loss,
    a2c_loss_and_gradients,
    build_networks,
    n_step_targets,
    select_action,
    train_a2c,
)
from .config import EPISODES, FRAMES, STEPS, AgentConfig, Budget, EpsilonSchedule
from .dqn import dqn_loss_gradients, td_targets, train_dqn
from .registry import AGENTS, RESUMABLE, get_trainer
from .replay import ReplayBatch, ReplayBuffer
from .results import AgentCheckpoint, CurvePoint, CurveRecorder, RunResult, SeedRun
from .tabular_q import QTable, epsilon_greedy, q_update, train_tabular_q
from .transfer import load_checkpoint, resume_checkpoint, save_checkpoint, transfer_checkpoint
