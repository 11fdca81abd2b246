"""Configuration types for the scanning-cell simulation."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..errors import ConfigError

HANDLING_KINDS = ("fixed", "uniform", "lognormal")

SECONDS_PER_WEEK = 7 * 24 * 3600.0
SECONDS_PER_DAY = 24 * 3600.0


@dataclass(frozen=True)
class HandlingTime:
    """Distribution of the robot's handling time per loading cycle.

    The mean is the robot-arm time consumed per completed scan in steady
    state (unload previous print, transfer the interleaving plate, pick
    and place the next print). 66.7 s is back-derived so that a saturated
    robot on two scanners completes 3600/66.7 = 54 scans per hour.

    `spread` is the half-range as a fraction of the mean for `uniform`,
    and the sigma of the underlying normal for `lognormal`.
    """

    kind: str = "fixed"
    mean_seconds: float = 66.7
    spread: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in HANDLING_KINDS:
            raise ConfigError(f"handling kind must be one of {HANDLING_KINDS}, got {self.kind!r}")
        if not self.mean_seconds > 0:
            raise ConfigError("handling mean must be positive")
        if self.spread < 0:
            raise ConfigError("handling spread must be non-negative")
        if self.kind == "uniform" and self.spread >= 1.0:
            raise ConfigError("uniform handling spread must be below 1")

    def sample(self, rng: random.Random) -> float:
        if self.kind == "fixed":
            return self.mean_seconds
        if self.kind == "uniform":
            half = self.mean_seconds * self.spread
            return rng.uniform(self.mean_seconds - half, self.mean_seconds + half)
        sigma = self.spread
        mu = math.log(self.mean_seconds) - sigma * sigma / 2.0
        return max(1e-3, rng.lognormvariate(mu, sigma))

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "mean_seconds": self.mean_seconds, "spread": self.spread}

    @classmethod
    def from_json_dict(cls, data: dict) -> "HandlingTime":
        return cls(
            kind=data.get("kind", "fixed"),
            mean_seconds=float(data.get("mean_seconds", 66.7)),
            spread=float(data.get("spread", 0.0)),
        )


@dataclass(frozen=True)
class WeeklySchedule:
    """Worker-present intervals, repeated weekly.

    Intervals are (day, start_hour, end_hour) with day 0 = Monday 00:00,
    which is also simulation time zero. Workers resolve reported errors
    and refill empty hoppers only while present.
    """

    intervals: tuple[tuple[int, float, float], ...] = tuple(
        (day, 9.0, 17.0) for day in range(5)
    )

    def __post_init__(self) -> None:
        for day, start, end in self.intervals:
            if not 0 <= day <= 6:
                raise ConfigError(f"day must be 0-6, got {day}")
            if not 0.0 <= start < end <= 24.0:
                raise ConfigError(f"invalid interval hours ({start}, {end})")

    def is_present(self, t_seconds: float) -> bool:
        week_t = t_seconds % SECONDS_PER_WEEK
        for day, start, end in self.intervals:
            lo = day * SECONDS_PER_DAY + start * 3600.0
            hi = day * SECONDS_PER_DAY + end * 3600.0
            if lo <= week_t < hi:
                return True
        return False

    def next_present_time(self, t_seconds: float) -> float:
        """Earliest time >= t at which a worker is present; inf if never."""
        if not self.intervals:
            return math.inf
        if self.is_present(t_seconds):
            return t_seconds
        week_start = t_seconds - (t_seconds % SECONDS_PER_WEEK)
        best = math.inf
        for week in (week_start, week_start + SECONDS_PER_WEEK):
            for day, start, _ in self.intervals:
                candidate = week + day * SECONDS_PER_DAY + start * 3600.0
                if candidate >= t_seconds:
                    best = min(best, candidate)
        return best

    def to_json(self) -> list:
        return [list(interval) for interval in self.intervals]

    @classmethod
    def from_json(cls, data: list) -> "WeeklySchedule":
        return cls(tuple((int(d), float(s), float(e)) for d, s, e in data))


ALWAYS_PRESENT = WeeklySchedule(tuple((day, 0.0, 24.0) for day in range(7)))
NEVER_PRESENT = WeeklySchedule(())


@dataclass(frozen=True)
class CellConfig:
    """Parameters of one robot-and-scanners cell.

    `hopper_capacity` is prints per input hopper; `None` means hoppers
    never run dry. Prints are interleaved with steel plates (one plate
    between consecutive prints), and a hopper only holds prints of one
    size. `lift_retry_limit` counts total attempts: the default 3 is one
    try plus two further attempts with added downward force.
    `ramp_multiplier` optionally scales productivity week on week
    (handling times divide by multiplier^week).
    """

    scanners_per_robot: int = 2
    scan_seconds: float = 45.0
    handling_time: HandlingTime = field(default_factory=HandlingTime)
    hopper_capacity: int | None = 300
    lift_retry_limit: int = 3
    lift_failure_prob: float = 0.0
    attendance: WeeklySchedule = field(default_factory=WeeklySchedule)
    reload_seconds: float = 60.0
    ramp_multiplier: float = 1.0
    print_sizes: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.scanners_per_robot < 1:
            raise ConfigError("need at least one scanner per robot")
        if not self.scan_seconds > 0:
            raise ConfigError("scan duration must be positive")
        if self.hopper_capacity is not None and self.hopper_capacity < 1:
            raise ConfigError("hopper capacity must be at least 1 (or None for unlimited)")
        if self.lift_retry_limit < 1:
            raise ConfigError("lift retry limit must be at least 1")
        if not 0.0 <= self.lift_failure_prob <= 1.0:
            raise ConfigError("lift failure probability must lie in [0, 1]")
        if self.reload_seconds < 0:
            raise ConfigError("reload duration must be non-negative")
        if not self.ramp_multiplier > 0:
            raise ConfigError("ramp multiplier must be positive")
        if self.print_sizes is not None:
            if not self.print_sizes:
                raise ConfigError("print_sizes must be non-empty when given")
            if len(set(self.print_sizes)) > 1:
                raise ConfigError(
                    "mixed print sizes in one stack are not allowed: "
                    + ", ".join(sorted(set(self.print_sizes)))
                )

    def to_json_dict(self) -> dict:
        return {
            "scanners_per_robot": self.scanners_per_robot,
            "scan_seconds": self.scan_seconds,
            "handling_time": self.handling_time.to_json_dict(),
            "hopper_capacity": self.hopper_capacity,
            "lift_retry_limit": self.lift_retry_limit,
            "lift_failure_prob": self.lift_failure_prob,
            "attendance": self.attendance.to_json(),
            "reload_seconds": self.reload_seconds,
            "ramp_multiplier": self.ramp_multiplier,
            "print_sizes": list(self.print_sizes) if self.print_sizes else None,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CellConfig":
        kwargs: dict = {}
        if "scanners_per_robot" in data:
            kwargs["scanners_per_robot"] = int(data["scanners_per_robot"])
        if "scan_seconds" in data:
            kwargs["scan_seconds"] = float(data["scan_seconds"])
        if "handling_time" in data:
            kwargs["handling_time"] = HandlingTime.from_json_dict(data["handling_time"])
        if "hopper_capacity" in data:
            capacity = data["hopper_capacity"]
            kwargs["hopper_capacity"] = None if capacity is None else int(capacity)
        if "lift_retry_limit" in data:
            kwargs["lift_retry_limit"] = int(data["lift_retry_limit"])
        if "lift_failure_prob" in data:
            kwargs["lift_failure_prob"] = float(data["lift_failure_prob"])
        if "attendance" in data:
            kwargs["attendance"] = WeeklySchedule.from_json(data["attendance"])
        if "reload_seconds" in data:
            kwargs["reload_seconds"] = float(data["reload_seconds"])
        if "ramp_multiplier" in data:
            kwargs["ramp_multiplier"] = float(data["ramp_multiplier"])
        if data.get("print_sizes") is not None:
            kwargs["print_sizes"] = tuple(data["print_sizes"])
        return cls(**kwargs)
