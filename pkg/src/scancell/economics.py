"""Fixed and variable cost model for scanning pipeline variants.

Money is held as exact rationals (`fractions.Fraction` of GBP) so that
break-even thresholds in the millions of scans carry no float drift; the
published per-scan figure of 0.0075 GBP is sub-pence, which rules out an
integer minor-unit representation. Display values are floats rounded at
the edge.

All functions are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import DomainError

Money = Fraction
MoneyLike = Union[int, float, str, Fraction]


def as_money(value: MoneyLike) -> Money:
    """Exact GBP amount. Floats convert via their decimal string form."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"money amount must be finite, got {value}")
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class CostItem:
    label: str
    unit_cost: Money
    quantity: int

    def __post_init__(self) -> None:
        if self.unit_cost < 0:
            raise DomainError(f"unit cost for {self.label!r} must be non-negative")
        if self.quantity < 0:
            raise DomainError(f"quantity for {self.label!r} must be non-negative")

    @property
    def total(self) -> Money:
        return self.unit_cost * self.quantity


@dataclass(frozen=True)
class CostParams:
    """Cost structure of one pipeline variant.

    `fixed_total_override` lets a published headline figure stand even
    when it disagrees with the itemization; both remain inspectable.
    """

    per_scan_variable: Money
    fixed_items: tuple[CostItem, ...] = ()
    fixed_total_override: Money | None = None
    weekly_capacity: float | None = None

    def __post_init__(self) -> None:
        if self.per_scan_variable < 0:
            raise DomainError("per-scan variable cost must be non-negative")
        if self.fixed_total_override is not None and self.fixed_total_override < 0:
            raise DomainError("fixed total must be non-negative")
        if not self.fixed_items and self.fixed_total_override is None:
            raise DomainError("provide fixed_items, a fixed total, or both")
        if self.weekly_capacity is not None and self.weekly_capacity <= 0:
            raise DomainError("weekly capacity must be positive when given")

    @property
    def fixed_total(self) -> Money:
        if self.fixed_total_override is not None:
            return self.fixed_total_override
        return self.itemized_total

    @property
    def itemized_total(self) -> Money:
        return sum((item.total for item in self.fixed_items), Fraction(0))

    def to_json_dict(self) -> dict:
        out: dict = {
            "per_scan_variable": float(self.per_scan_variable),
            "fixed_items": [
                [item.label, float(item.unit_cost), item.quantity]
                for item in self.fixed_items
            ],
        }
        if self.fixed_total_override is not None:
            out["fixed_total"] = float(self.fixed_total_override)
        if self.weekly_capacity is not None:
            out["weekly_capacity"] = self.weekly_capacity
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "CostParams":
        items = tuple(
            CostItem(label, as_money(unit_cost), int(quantity))
            for label, unit_cost, quantity in data.get("fixed_items", ())
        )
        override = data.get("fixed_total")
        return cls(
            per_scan_variable=as_money(data["per_scan_variable"]),
            fixed_items=items,
            fixed_total_override=None if override is None else as_money(override),
            weekly_capacity=data.get("weekly_capacity"),
        )


ROBOTIC_BENCHMARK_ITEMS = (
    CostItem("engineered table housing robot and scanner pair", as_money(80_000), 4),
    CostItem("robotic arm", as_money(36_000), 4),
    CostItem("scanner", as_money(5_000), 8),
    CostItem("scanner-lid lifting automation", as_money(350), 8),
    CostItem("manual scanner for fragile prints", as_money(5_000), 1),
)
MANUAL_BENCHMARK_ITEMS = (CostItem("scanner", as_money(5_000), 2),)

# Published headline fixed cost; 350 GBP above what the itemization sums
# to. Both figures are preserved rather than reconciled.
ROBOTIC_HEADLINE_FIXED_GBP = as_money(512_150)
MANUAL_FIXED_GBP = as_money(10_000)
ROBOTIC_PER_SCAN_GBP = as_money("0.0075")
MANUAL_PER_SCAN_GBP = as_money("0.22")
ROBOTIC_WEEKLY_CAPACITY = 36_288.0  # 8 scanners around the clock
MANUAL_WEEKLY_CAPACITY = 3_500.0  # 2 scanners, 35-hour week


def itemized_fixed_cost(scenario: str) -> Money:
    """Sum of the itemized capital costs for a benchmark scenario."""
    if scenario == "robotic_benchmark":
        return sum((item.total for item in ROBOTIC_BENCHMARK_ITEMS), Fraction(0))
    if scenario == "manual_benchmark":
        return sum((item.total for item in MANUAL_BENCHMARK_ITEMS), Fraction(0))
    raise DomainError(f"unknown scenario {scenario!r}")


def robotic_benchmark(headline: bool = True) -> CostParams:
    """Benchmark robotic pipeline: 4 robots, 8 scanners, 1 manual spare.

    With `headline=True` the published 512,150 GBP fixed total overrides
    the 511,800 GBP itemization.
    """
    return CostParams(
        per_scan_variable=ROBOTIC_PER_SCAN_GBP,
        fixed_items=ROBOTIC_BENCHMARK_ITEMS,
        fixed_total_override=ROBOTIC_HEADLINE_FIXED_GBP if headline else None,
        weekly_capacity=ROBOTIC_WEEKLY_CAPACITY,
    )


def manual_benchmark() -> CostParams:
    """Benchmark manual pipeline: one full-time worker on two scanners."""
    return CostParams(
        per_scan_variable=MANUAL_PER_SCAN_GBP,
        fixed_items=MANUAL_BENCHMARK_ITEMS,
        fixed_total_override=MANUAL_FIXED_GBP,
        weekly_capacity=MANUAL_WEEKLY_CAPACITY,
    )


def total_cost(params: CostParams, n: int) -> Money:
    if n < 0:
        raise DomainError("scan count must be non-negative")
    return params.fixed_total + params.per_scan_variable * n


def cost_per_scan(params: CostParams, n: int) -> Money:
    """Average cost per scan after `n` scans: fixed/n + variable."""
    if n < 1:
        raise DomainError("cost per scan needs at least one scan")
    return params.fixed_total / n + params.per_scan_variable


def break_even(a: CostParams, b: CostParams) -> int:
    """Smallest scan count at which variant `a` is no more expensive than `b`.

    Closed form ceil((fixed_a - fixed_b) / (var_b - var_a)) in the
    interesting case; raises when `a` never catches up.
    """
    if total_cost(a, 1) <= total_cost(b, 1):
        return 1
    delta_var = b.per_scan_variable - a.per_scan_variable
    if delta_var <= 0:
        raise DomainError(
            "no break-even point: variant a starts more expensive and its"
            " per-scan cost is not lower"
        )
    delta_fixed = a.fixed_total - b.fixed_total
    return max(1, math.ceil(delta_fixed / delta_var))


def cost_halving_point(a: CostParams, b: CostParams) -> int:
    """Smallest scan count at which `a` costs at most half of `b` per scan."""
    if cost_per_scan(a, 1) <= cost_per_scan(b, 1) / 2:
        return 1
    slope = b.per_scan_variable / 2 - a.per_scan_variable
    if slope <= 0:
        raise DomainError(
            "no cost-halving point: variant a's per-scan cost never falls"
            " below half of variant b's"
        )
    numerator = a.fixed_total - b.fixed_total / 2
    return max(1, math.ceil(numerator / slope))


@dataclass(frozen=True)
class WeeksToVolume:
    scans: int
    weekly_capacity: float
    fractional_weeks: float
    whole_weeks: int

    def to_json_dict(self) -> dict:
        return {
            "scans": self.scans,
            "weekly_capacity": self.weekly_capacity,
            "fractional_weeks": self.fractional_weeks,
            "whole_weeks": self.whole_weeks,
        }


def weeks_to_volume(n: int, weekly_capacity: float) -> WeeksToVolume:
    """Whole and fractional weeks of production needed for `n` scans."""
    if weekly_capacity <= 0:
        raise DomainError("weekly capacity must be positive")
    if n < 0:
        raise DomainError("scan count must be non-negative")
    fractional = n / weekly_capacity
    return WeeksToVolume(n, weekly_capacity, fractional, math.ceil(fractional))


def cost_curve(
    a: CostParams, b: CostParams, counts: Iterable[int]
) -> Iterator[tuple[int, float, float]]:
    """Rows of (n, per-scan cost of a, per-scan cost of b) for plotting."""
    for n in counts:
        yield n, float(cost_per_scan(a, n)), float(cost_per_scan(b, n))


def geometric_counts(start: int, stop: int, points: int) -> list[int]:
    """Roughly geometric grid of scan counts, deduplicated and sorted."""
    if start < 1 or stop < start or points < 2:
        raise DomainError("need 1 <= start <= stop and at least two points")
    ratio = (stop / start) ** (1.0 / (points - 1))
    counts = sorted({int(round(start * ratio**i)) for i in range(points)})
    return [max(1, c) for c in counts]
