"""
Step-size schedules for the threshold update
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BetaSchedule:
    """
    constant: `value` throughout. linear_staircase: `num_stages` equal slices of
    the training budget, rising linearly from `start` to `end`.
    """

    kind: str = "constant"
    value: float = 0.1
    start: float = 0.001
    end: float = 0.1
    num_stages: int = 10

    def __post_init__(self):
        if self.kind == "constant":
            # 0 is accepted so a run can freeze the threshold.
            if not 0.0 <= self.value < 1.0:
                raise ValueError(f"Constant beta must lie in [0, 1), got {self.value}")
        elif self.kind == "linear_staircase":
            if not (0.0 < self.start < 1.0 and 0.0 < self.end < 1.0):
                raise ValueError("Staircase betas must lie in (0, 1)")
            if self.start > self.end:
                raise ValueError("Staircase must be nondecreasing from start to end")
            if self.num_stages < 1:
                raise ValueError("Staircase needs at least one stage")
        else:
            raise ValueError(f"Unknown beta schedule kind {self.kind!r}")

    @classmethod
    def constant(cls, value: float) -> "BetaSchedule":
        return cls(kind="constant", value=value)

    @classmethod
    def linear_staircase(cls, start: float, end: float, num_stages: int) -> "BetaSchedule":
        return cls(kind="linear_staircase", start=start, end=end, num_stages=num_stages)

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        return {
            "kind": "linear_staircase",
            "start": self.start,
            "end": self.end,
            "num_stages": self.num_stages,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BetaSchedule":
        if data.get("kind", "constant") == "constant":
            return cls.constant(float(data.get("value", 0.1)))
        return cls.linear_staircase(
            float(data["start"]), float(data["end"]), int(data["num_stages"])
        )


def current_beta(schedule: BetaSchedule, training_fraction: float) -> float:
    if schedule.kind == "constant":
        return schedule.value
    fraction = min(max(training_fraction, 0.0), 1.0)
    stage = math.floor(fraction * schedule.num_stages)
    beta = schedule.start + (schedule.end - schedule.start) * stage / max(
        schedule.num_stages - 1, 1
    )
    return min(beta, schedule.end)
