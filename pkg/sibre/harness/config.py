"""
Declarative experiment configuration, presets and the canonical config hash
"""

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..agents import FRAMES, RESUMABLE, AgentConfig
from ..environments import ENVIRONMENTS
from ..errors import ConfigError
from ..shaper import CONTINUING, EPISODIC, BetaSchedule, ThresholdMode, ThresholdState

NO_SWEEP, BETA_VALUES, LEARNING_RATES, TRANSFER_STAGE = (
    "none",
    "beta_values",
    "learning_rates",
    "transfer_stage",
)
SWEEP_AXES = (NO_SWEEP, BETA_VALUES, LEARNING_RATES, TRANSFER_STAGE)

# "schedule" as a beta sweep value means the preset's own staircase.
SCHEDULE_VALUE = "schedule"

STAIRCASE = {"kind": "linear_staircase", "start": 0.001, "end": 0.1, "num_stages": 10}
TEN_SEEDS = list(range(10))
FIVE_SEEDS = list(range(5))


def _a2c_gridworld(env_id: str, params: dict, budget: int) -> dict:
    return {
        "environment": {"id": env_id, "params": params},
        "agent": {
            "id": "a2c",
            "config": {
                "learning_rate": 7e-4,
                "gamma": 0.99,
                "entropy_coefficient": 0.01,
                "hidden_dims": [64, 64],
                "rollout_length": 5,
                "budget_kind": FRAMES,
                "budget": budget,
                "log_every": 200,
            },
        },
        "shaper": {"enabled": True, "schedule": dict(STAIRCASE)},
        "seeds": FIVE_SEEDS,
        "smoothing_window": 100,
    }


def _dqn_cartpole(continuing: bool) -> dict:
    preset = {
        "environment": {"id": "cartpole_continuing" if continuing else "cartpole", "params": {}},
        "agent": {
            "id": "dqn",
            "config": {
                "learning_rate": 1e-3,
                "gamma": 0.99,
                "epsilon_start": 1.0,
                "epsilon_decay": 0.9999,
                "epsilon_decay_every": 1,
                "hidden_dims": [32, 32],
                "activation": "relu",
                "batch_size": 32,
                "target_update_period": 1000,
                "replay_capacity": 100_000,
                "learning_starts": 1000,
                "budget_kind": FRAMES,
                "budget": 100_000,
                "report_window": 500,
                "log_every": 20,
            },
        },
        "shaper": {"enabled": True, "schedule": dict(STAIRCASE)},
        "seeds": FIVE_SEEDS,
        "smoothing_window": 10 if continuing else 100,
    }
    if continuing:
        preset["shaper"].update({"mode": CONTINUING, "gamma": 0.99, "update_period": 500})
    return preset


PRESETS: Dict[str, dict] = {
    "frozenlake": {
        "environment": {"id": "frozenlake", "params": {"slippery": True, "turn_limit": 100}},
        "agent": {
            "id": "tabular_q",
            "config": {
                "learning_rate": 0.1,
                "gamma": 0.99,
                "epsilon_start": 1.0,
                "epsilon_decay": 0.9,
                "epsilon_decay_every": 100,
                "epsilon_min": 0.01,
                "epsilon_decay_unit": "episodes",
                "budget": 10_000,
            },
        },
        "shaper": {"enabled": True, "schedule": dict(STAIRCASE)},
        "seeds": TEN_SEEDS,
        "final_window": 1000,
    },
    "doorkey6": _a2c_gridworld("doorkey", {"size": 6, "encoding_size": 8}, 200_000),
    "doorkey5": _a2c_gridworld("doorkey", {"size": 5, "encoding_size": 8}, 200_000),
    "doorkey8": _a2c_gridworld("doorkey", {"size": 8, "encoding_size": 8}, 200_000),
    "multiroom2": _a2c_gridworld(
        "multiroom", {"size": 8, "num_rooms": 2, "encoding_size": 8}, 200_000
    ),
    "cartpole_cont": _dqn_cartpole(continuing=True),
    "cartpole": _dqn_cartpole(continuing=False),
    "mountaincar": {
        "environment": {"id": "mountaincar", "params": {}},
        "agent": {
            "id": "a2c",
            "config": {
                "learning_rate": 1e-3,
                "gamma": 0.95,
                "entropy_coefficient": 0.1,
                "hidden_dims": [32, 32],
                "budget": 50,
                "log_every": 10,
            },
        },
        "shaper": {"enabled": True, "schedule": {"kind": "constant", "value": 0.1}},
        "seeds": TEN_SEEDS,
    },
}
PRESETS["transfer_doorkey"] = copy.deepcopy(PRESETS["doorkey5"])
PRESETS["transfer_doorkey"]["agent"]["config"]["budget"] = 100_000
PRESETS["transfer_doorkey"]["transfer"] = {
    "environment": {"id": "doorkey", "params": {"size": 8, "encoding_size": 8}},
    "budget": 200_000,
}
PRESET_ALIASES = {"frozenlake_q": "frozenlake"}
CUSTOM_PRESET = "custom"

# (stage-one budget, stage-two budget) used with --paper-scale
FULL_BUDGETS: Dict[str, Tuple[int, Optional[int]]] = {
    "doorkey6": (1_800_000, None),
    "doorkey5": (1_800_000, None),
    "doorkey8": (1_800_000, None),
    "multiroom2": (1_800_000, None),
    "cartpole_cont": (1_000_000, None),
    "cartpole": (1_000_000, None),
    "frozenlake": (10_000, None),
    "mountaincar": (50, None),
    "transfer_doorkey": (800_000, 2_400_000),
}


@dataclass(frozen=True)
class ShaperConfig:
    enabled: bool = True
    schedule: BetaSchedule = BetaSchedule.constant(0.1)
    update_period: int = 1
    mode: str = EPISODIC
    gamma: float = 1.0
    rho0: float = 0.0

    def threshold_state(self) -> Optional[ThresholdState]:
        if not self.enabled:
            return None
        mode = ThresholdMode(kind=self.mode, gamma=self.gamma)
        return ThresholdState.create(self.schedule, self.update_period, self.rho0, mode)

    def to_dict(self) -> dict:
        return {
            "enabled": self.enabled,
            "schedule": self.schedule.to_dict(),
            "update_period": self.update_period,
            "mode": self.mode,
            "gamma": self.gamma,
            "rho0": self.rho0,
        }


@dataclass(frozen=True)
class TransferConfig:
    environment: str
    environment_params: Dict[str, Any]
    budget: int

    def to_dict(self) -> dict:
        return {
            "environment": {"id": self.environment, "params": dict(self.environment_params)},
            "budget": self.budget,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str
    environment: str
    environment_params: Dict[str, Any]
    agent: str
    agent_config: AgentConfig
    shaper: ShaperConfig
    seeds: Tuple[int, ...]
    compare_baseline: bool = True
    sweep_axis: str = NO_SWEEP
    sweep_values: Tuple[Any, ...] = ()
    transfer: Optional[TransferConfig] = None
    output_dir: Optional[str] = None
    final_window: Optional[int] = None
    smoothing_window: int = 100

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "environment": {"id": self.environment, "params": dict(self.environment_params)},
            "agent": {"id": self.agent, "config": self.agent_config.to_dict()},
            "shaper": self.shaper.to_dict(),
            "seeds": list(self.seeds),
            "compare_baseline": self.compare_baseline,
            "sweep": {"axis": self.sweep_axis, "values": list(self.sweep_values)},
            "transfer": None if self.transfer is None else self.transfer.to_dict(),
            "output_dir": self.output_dir,
            "final_window": self.final_window,
            "smoothing_window": self.smoothing_window,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    @property
    def is_continuing(self) -> bool:
        return self.environment == "cartpole_continuing"


def _merge(base: dict, overrides: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def resolve_preset(name: str) -> Tuple[str, dict]:
    canonical = PRESET_ALIASES.get(name, name)
    if canonical not in PRESETS:
        raise ConfigError(
            f"Unknown preset {name!r}; choose from {sorted(list(PRESETS) + list(PRESET_ALIASES))}"
        )
    return canonical, copy.deepcopy(PRESETS[canonical])


def expand_config(data: dict, full_scale: bool = False) -> ExperimentConfig:
    """Apply the named preset under `data` and build a fully populated config."""
    data = dict(data)
    preset = data.pop("preset", None) or CUSTOM_PRESET
    if preset != CUSTOM_PRESET:
        preset, base = resolve_preset(preset)
        data = _merge(base, data)

    try:
        environment = data["environment"]
        agent = data["agent"]
    except KeyError as e:
        raise ConfigError(f"Config without a preset must set {e.args[0]!r}") from None
    if environment["id"] not in ENVIRONMENTS:
        raise ConfigError(f"Unknown environment {environment['id']!r}")

    try:
        agent_config = AgentConfig.from_dict(agent.get("config", {}))
        shaper_data = data.get("shaper", {})
        shaper = ShaperConfig(
            enabled=bool(shaper_data.get("enabled", True)),
            schedule=BetaSchedule.from_dict(shaper_data.get("schedule", {})),
            update_period=int(shaper_data.get("update_period", 1)),
            mode=shaper_data.get("mode", EPISODIC),
            gamma=float(shaper_data.get("gamma", 1.0)),
            rho0=float(shaper_data.get("rho0", 0.0)),
        )
        shaper.threshold_state()
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e

    seeds = tuple(int(s) for s in data.get("seeds", [0]))
    if not seeds:
        raise ConfigError("At least one seed is required")
    if len(set(seeds)) != len(seeds):
        raise ConfigError(f"Seeds must be distinct, got {list(seeds)}")

    sweep = data.get("sweep") or {}
    sweep_axis = sweep.get("axis", NO_SWEEP)
    if sweep_axis not in SWEEP_AXES:
        raise ConfigError(f"Invalid sweep axis {sweep_axis!r}; choose from {SWEEP_AXES}")

    transfer = None
    if data.get("transfer"):
        if agent["id"] not in RESUMABLE:
            raise ConfigError(f"Agent {agent['id']!r} cannot resume from a checkpoint")
        transfer = TransferConfig(
            environment=data["transfer"]["environment"]["id"],
            environment_params=dict(data["transfer"]["environment"].get("params", {})),
            budget=int(data["transfer"].get("budget", 0)),
        )

    config = ExperimentConfig(
        preset=preset,
        environment=environment["id"],
        environment_params=dict(environment.get("params", {})),
        agent=agent["id"],
        agent_config=agent_config,
        shaper=shaper,
        seeds=seeds,
        compare_baseline=bool(data.get("compare_baseline", True)),
        sweep_axis=sweep_axis,
        sweep_values=tuple(sweep.get("values", ())),
        transfer=transfer,
        output_dir=data.get("output_dir"),
        final_window=data.get("final_window"),
        smoothing_window=int(data.get("smoothing_window", 100)),
    )
    return with_full_scale(config) if full_scale else config


def with_full_scale(config: ExperimentConfig) -> ExperimentConfig:
    if config.preset not in FULL_BUDGETS:
        raise ConfigError(f"No full-scale budget for {config.preset!r}")
    budget, transfer_budget = FULL_BUDGETS[config.preset]
    data = config.to_dict()
    data["agent"]["config"]["budget"] = budget
    if transfer_budget is not None and data["transfer"]:
        data["transfer"]["budget"] = transfer_budget
    return expand_config(data)


def load_config(
    path: Optional[Union[str, Path]] = None,
    preset: Optional[str] = None,
    seeds: Optional[List[int]] = None,
    output_dir: Optional[str] = None,
    full_scale: bool = False,
) -> ExperimentConfig:
    """JSON file and/or preset name, with command-line seeds and output directory on top."""
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"Config file {path} does not exist") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if preset is not None:
        data["preset"] = preset
    if seeds is not None:
        data["seeds"] = list(seeds)
    if output_dir is not None:
        data["output_dir"] = output_dir
    return expand_config(data, full_scale=full_scale)


def parse_seeds(text: str) -> List[int]:
    """'0-4' or '0,3,7' (mixing both is allowed)."""
    seeds: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part[1:]:
                low, high = part.split("-", 1)
                seeds.extend(range(int(low), int(high) + 1))
            elif part:
                seeds.append(int(part))
    except ValueError:
        raise ConfigError(f"Cannot parse seed list {text!r}") from None
    return seeds
