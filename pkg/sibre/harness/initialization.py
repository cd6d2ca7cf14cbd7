"""
Functions to load harness settings from environment variables
"""

import os
from dataclasses import dataclass
from typing import Dict, List, Optional

from dotenv import load_dotenv

from ..errors import ConfigError

# load .env file to environment
load_dotenv()

WORKERS, OUTPUT_DIR, LOG_LEVEL = "SIBRE_WORKERS", "SIBRE_OUTPUT_DIR", "SIBRE_LOG_LEVEL"


def load_return_env(variables: List[str]) -> Dict[str, Optional[str]]:
    return {var: os.getenv(var, None) for var in variables}


@dataclass(frozen=True)
class HarnessSettings:
    workers: int = 1
    output_dir: str = "results"
    log_level: str = "INFO"


def load_settings() -> HarnessSettings:
    env = load_return_env([WORKERS, OUTPUT_DIR, LOG_LEVEL])
    workers = env[WORKERS] or "1"
    try:
        worker_count = int(workers)
    except ValueError:
        raise ConfigError(f"{WORKERS} must be an integer, got {workers!r}") from None
    if worker_count < 1:
        raise ConfigError(f"{WORKERS} must be at least 1, got {worker_count}")
    return HarnessSettings(
        workers=worker_count,
        output_dir=env[OUTPUT_DIR] or "results",
        log_level=(env[LOG_LEVEL] or "INFO").upper(),
    )
