"""
Class for tracking and displaying run statistics
"""

from dataclasses import dataclass

from ..agents import RunResult


@dataclass
class RunStatistics:
    label: str
    frames: int = 0
    episodes: int = 0
    updates: int = 0
    wall_clock: float = 0.0
    seeds: int = 0

    @classmethod
    def from_result(cls, result: RunResult, label: str = "") -> "RunStatistics":
        stats = cls(label=label or f"{result.agent}/{result.arm}")
        for run in result.runs:
            stats.frames += run.frames
            stats.episodes += run.episodes
            stats.updates += 0 if run.threshold is None else run.threshold.updates_applied
            stats.wall_clock += run.wall_clock
            stats.seeds += 1
        return stats

    def get_frames_per_second(self) -> float:
        """
        Environment steps per wall-clock second, summed over seeds
        """
        if self.wall_clock != 0:
            return self.frames / self.wall_clock
        return 0.0

    def add(self, other: "RunStatistics") -> None:
        """
        Add statistics from another RunStatistics object to this one.
        """
        if not isinstance(other, RunStatistics):
            raise TypeError("Can only add RunStatistics objects")

        self.frames += other.frames
        self.episodes += other.episodes
        self.updates += other.updates
        self.wall_clock += other.wall_clock
        self.seeds += other.seeds

    def __str__(self):
        return (
            f"\n## {self.get_frames_per_second():.0f} frames/s\n"
            f"Wall clock: {self.wall_clock:.2f}s  Run: {self.label}\n\n"
            f"| Metric | Value |\n"
            f"|--------|-------|\n"
            f"| Seeds | {self.seeds} |\n"
            f"| Frames | {self.frames} |\n"
            f"| Episodes | {self.episodes} |\n"
            f"| Threshold updates | {self.updates} |\n"
            f"| Wall clock (s) | {self.wall_clock:.2f} |"
        )
