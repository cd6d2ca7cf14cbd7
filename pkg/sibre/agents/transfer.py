"""
Carry trained networks and the threshold onto a new environment instance
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

from ..errors import IncompatibleCheckpointError
from ..mdp import Environment
from ..tinynet import DenseNet, load_parameters_csv, save_parameters_csv
from .results import AgentCheckpoint, RunResult

logger = logging.getLogger(__name__)

STATE_FILE = "state.json"


def resume_checkpoint(checkpoint: AgentCheckpoint, new_env: Environment) -> AgentCheckpoint:
    if checkpoint.observation_dim != new_env.observation_dim:
        raise IncompatibleCheckpointError(
            f"Checkpoint encodes {checkpoint.observation_dim} features, "
            f"{new_env.env_id} encodes {new_env.observation_dim}"
        )
    if checkpoint.action_spec != new_env.action_spec:
        raise IncompatibleCheckpointError(
            f"Checkpoint action set {checkpoint.action_spec} differs from {new_env.action_spec}"
        )
    return checkpoint.copy()


def transfer_checkpoint(run: RunResult, new_env: Environment) -> Dict[int, AgentCheckpoint]:
    """
    Per-seed resumable state for `new_env`: network parameters always, the
    threshold only when the source run was shaped.
    """
    resumed = {}
    for seed_run in run.runs:
        if seed_run.checkpoint is None:
            raise IncompatibleCheckpointError(
                f"{run.agent} seed {seed_run.seed} produced no network checkpoint"
            )
        resumed[seed_run.seed] = resume_checkpoint(seed_run.checkpoint, new_env)
        logger.debug(
            "seed %d resumes at frame %d with rho %s",
            seed_run.seed,
            seed_run.checkpoint.frames,
            None if seed_run.threshold is None else seed_run.threshold.rho,
        )
    return resumed


def save_checkpoint(checkpoint: AgentCheckpoint, directory: Union[str, Path]) -> List[Path]:
    """One parameter CSV per network, plus the threshold and counters in state.json."""
    directory = Path(directory)
    paths = [
        save_parameters_csv(net, directory / f"{name}.csv")
        for name, net in sorted(checkpoint.networks.items())
    ]
    threshold = checkpoint.threshold
    state = {
        "agent": checkpoint.agent,
        "observation_dim": checkpoint.observation_dim,
        "frames": checkpoint.frames,
        "episodes": checkpoint.episodes,
        "curve_points": checkpoint.curve_points,
        "rho": None if threshold is None else threshold.rho,
        "beta": None if threshold is None else threshold.beta,
    }
    state_path = directory / STATE_FILE
    state_path.write_text(json.dumps(state, indent=2, sort_keys=True) + "\n")
    return paths + [state_path]


def load_checkpoint(directory: Union[str, Path]) -> Tuple[Dict[str, DenseNet], dict]:
    """Networks by name and the saved state written by `save_checkpoint`."""
    directory = Path(directory)
    networks = {path.stem: load_parameters_csv(path) for path in sorted(directory.glob("*.csv"))}
    return networks, json.loads((directory / STATE_FILE).read_text())
