"""
Look up training loops by agent id
"""

from typing import Callable, Dict

from ..errors import ConfigError
from .a2c import train_a2c
from .dqn import train_dqn
from .tabular_q import train_tabular_q

AGENTS: Dict[str, Callable] = {
    "tabular_q": train_tabular_q,
    "dqn": train_dqn,
    "a2c": train_a2c,
}

RESUMABLE = ("dqn", "a2c")


def get_trainer(agent_id: str) -> Callable:
    try:
        return AGENTS[agent_id]
    except KeyError:
        raise ConfigError(f"Unknown agent {agent_id!r}; choose from {sorted(AGENTS)}") from None
