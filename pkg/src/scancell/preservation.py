"""Condition assessment and remediation planning for boxed prints.

The planner walks the conservation decision sequence in a fixed order
(mould, blocking, silver dust, annotations, curling, rips) and produces an
ordered remediation plan plus a scanning route. A seeded Monte Carlo
sampler draws synthetic box conditions at configured issue rates, and an
aggregator recovers empirical frequencies from a batch of conditions.

The planner is pure. The sampler needs one random stream per concurrent
worker: give each worker its own seed.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, fields
from typing import Sequence

from .errors import DomainError


class MouldState(enum.Enum):
    NONE = "none"
    DORMANT = "dormant"
    ACTIVE = "active"


class RipDamage(enum.Enum):
    NONE = "none"
    MINOR = "minor"
    EXTENSIVE = "extensive"


class Step(enum.Enum):
    CLEAN_MOULD = "clean_mould"
    SEPARATE_BLOCKED = "separate_blocked"
    DRY_CLEAN_SILVER = "dry_clean_silver"
    SOLVENT_CLEAN = "solvent_clean"
    HUMIDIFY_AND_PRESS = "humidify_and_press"
    SLEEVE_PROTECT = "sleeve_protect"
    VACUUM_PACK = "vacuum_pack"


class Routing(enum.Enum):
    STANDARD = "standard"
    MOULD_ISOLATED = "mould_isolated"


class ScanRoute(enum.Enum):
    ROBOTIC = "robotic"
    MANUAL_FLATBED = "manual_flatbed"
    UNSCANNABLE = "unscannable"


class ArtefactClass(enum.Enum):
    """Image artefact taxonomy for scanned prints.

    The first three arise during exposure, printing, or storage of the
    original and cannot be remediated; the rest respond to conservation
    treatment.
    """

    STATIC_MARKS = "static_marks"
    PRINT_EXPOSURE_ERROR = "print_exposure_error"
    PROCESSING_ERROR = "processing_error"
    BLOCKING_DAMAGE = "blocking_damage"
    SILVER_MIGRATION = "silver_migration"
    HISTORICAL_ANNOTATIONS = "historical_annotations"
    ADHESIVE_DAMAGE = "adhesive_damage"
    EMULSION_PEELING = "emulsion_peeling"

    @property
    def remediable(self) -> bool:
        return self not in _NON_REMEDIABLE


_NON_REMEDIABLE = frozenset(
    {
        ArtefactClass.STATIC_MARKS,
        ArtefactClass.PRINT_EXPOSURE_ERROR,
        ArtefactClass.PROCESSING_ERROR,
    }
)


@dataclass(frozen=True)
class PrintCondition:
    """Condition flags for one box or print."""

    mould: MouldState = MouldState.NONE
    blocking: bool = False
    silver_dust: bool = False
    annotations_or_adhesives: bool = False
    curling_or_creases: bool = False
    rips_or_peeling: RipDamage = RipDamage.NONE

    @property
    def any_issue(self) -> bool:
        return (
            self.mould is not MouldState.NONE
            or self.blocking
            or self.silver_dust
            or self.annotations_or_adhesives
            or self.curling_or_creases
            or self.rips_or_peeling is not RipDamage.NONE
        )

    def to_json_dict(self) -> dict:
        return {
            "mould": self.mould.value,
            "blocking": self.blocking,
            "silver_dust": self.silver_dust,
            "annotations_or_adhesives": self.annotations_or_adhesives,
            "curling_or_creases": self.curling_or_creases,
            "rips_or_peeling": self.rips_or_peeling.value,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PrintCondition":
        return cls(
            mould=MouldState(data.get("mould", "none")),
            blocking=bool(data.get("blocking", False)),
            silver_dust=bool(data.get("silver_dust", False)),
            annotations_or_adhesives=bool(data.get("annotations_or_adhesives", False)),
            curling_or_creases=bool(data.get("curling_or_creases", False)),
            rips_or_peeling=RipDamage(data.get("rips_or_peeling", "none")),
        )


@dataclass(frozen=True)
class RemediationPlan:
    """Ordered remediation steps plus routing for one box or print."""

    steps: tuple[Step, ...]
    routing: Routing
    scan_route: ScanRoute

    def to_json_dict(self) -> dict:
        return {
            "steps": [step.value for step in self.steps],
            "routing": self.routing.value,
            "scan_route": self.scan_route.value,
        }


def plan_remediation(condition: PrintCondition) -> RemediationPlan:
    """Derive the remediation plan for a condition.

    Steps follow the inspection order. Any mould isolates the material in
    a separate moisture-free pipeline. Extensive peeling ends the plan:
    nothing downstream can be done and the prints cannot be scanned.
    Sleeved prints are too delicate for robot handling and go to the
    manual flatbed.
    """
    steps: list[Step] = []
    routing = (
        Routing.MOULD_ISOLATED if condition.mould is not MouldState.NONE else Routing.STANDARD
    )
    if condition.mould is not MouldState.NONE:
        steps.append(Step.CLEAN_MOULD)
    if condition.blocking:
        steps.append(Step.SEPARATE_BLOCKED)
    if condition.silver_dust:
        steps.append(Step.DRY_CLEAN_SILVER)
    if condition.annotations_or_adhesives:
        steps.append(Step.SOLVENT_CLEAN)
    if condition.curling_or_creases:
        steps.append(Step.HUMIDIFY_AND_PRESS)

    if condition.rips_or_peeling is RipDamage.EXTENSIVE:
        return RemediationPlan(tuple(steps), routing, ScanRoute.UNSCANNABLE)

    if condition.rips_or_peeling is RipDamage.MINOR:
        steps.append(Step.SLEEVE_PROTECT)
        scan_route = ScanRoute.MANUAL_FLATBED
    else:
        scan_route = ScanRoute.ROBOTIC
    steps.append(Step.VACUUM_PACK)
    return RemediationPlan(tuple(steps), routing, scan_route)


@dataclass(frozen=True)
class IssueRates:
    """Per-issue probabilities for the box-condition sampler.

    Defaults are the archive's observed shares: 250, 26, 2825, 579, 2823,
    259 and 291 affected boxes out of 16,634 total, with 6,802 (41%)
    needing at least one intervention.
    """

    mould: float = 0.015
    blocking: float = 0.002
    cleaning: float = 0.17
    tape: float = 0.035
    curling: float = 0.17
    ripped: float = 0.020
    emulsion_peeling: float = 0.018
    any_intervention: float = 0.41
    total_boxes: int = 16_634

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name == "total_boxes":
                continue
            value = getattr(self, f.name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"rate {f.name} must lie in [0, 1], got {value}")
        if self.total_boxes < 0:
            raise DomainError("total_boxes must be non-negative")

    def issue_probabilities(self) -> tuple[float, ...]:
        """The seven sampled issue rates, in draw order."""
        return (
            self.mould,
            self.blocking,
            self.cleaning,
            self.tape,
            self.curling,
            self.ripped,
            self.emulsion_peeling,
        )

    @classmethod
    def from_counts(
        cls,
        mould: int,
        blocking: int,
        cleaning: int,
        tape: int,
        curling: int,
        ripped: int,
        emulsion_peeling: int,
        any_intervention: int,
        total_boxes: int,
    ) -> "IssueRates":
        if total_boxes < 1:
            raise DomainError("total_boxes must be positive")
        return cls(
            mould=mould / total_boxes,
            blocking=blocking / total_boxes,
            cleaning=cleaning / total_boxes,
            tape=tape / total_boxes,
            curling=curling / total_boxes,
            ripped=ripped / total_boxes,
            emulsion_peeling=emulsion_peeling / total_boxes,
            any_intervention=any_intervention / total_boxes,
            total_boxes=total_boxes,
        )


def independent_any_intervention_rate(rates: IssueRates) -> float:
    """Share of boxes with at least one issue if issues were independent.

    1 - prod(1 - p_i). The archive observed 41%, above this figure, so the
    true joint distribution cannot be the independent one.
    """
    product = 1.0
    for p in rates.issue_probabilities():
        product *= 1.0 - p
    return 1.0 - product


def implied_rips_or_peeling_rate(rates: IssueRates) -> float:
    """Probability the merged rips-or-peeling flag is set under independence.

    Rips and emulsion peeling are tallied separately in the source rates
    but land on a single condition field.
    """
    return 1.0 - (1.0 - rates.ripped) * (1.0 - rates.emulsion_peeling)


def _draw_condition(
    rng: random.Random,
    rates: IssueRates,
    dependence: float,
    active_mould_share: float,
    extensive_share: float,
) -> PrintCondition:
    probabilities = rates.issue_probabilities()
    mode = "independent"
    if dependence > 0.0 and rng.random() < dependence:
        mode = "comonotone"
    elif dependence < 0.0 and rng.random() < -dependence:
        mode = "disjoint"

    if mode == "comonotone":
        u = rng.random()
        flags = [u < p for p in probabilities]
    elif mode == "disjoint":
        u = rng.random()
        flags = []
        cursor = 0.0
        for p in probabilities:
            flags.append(cursor <= u < cursor + p)
            cursor += p
    else:
        flags = [rng.random() < p for p in probabilities]

    mould_hit, blocking, cleaning, tape, curling, ripped, peeling = flags

    mould = MouldState.NONE
    if mould_hit:
        mould = (
            MouldState.ACTIVE
            if rng.random() < active_mould_share
            else MouldState.DORMANT
        )
    rips = RipDamage.NONE
    if ripped or peeling:
        rips = (
            RipDamage.EXTENSIVE if rng.random() < extensive_share else RipDamage.MINOR
        )
    return PrintCondition(
        mould=mould,
        blocking=blocking,
        silver_dust=cleaning,
        annotations_or_adhesives=tape,
        curling_or_creases=curling,
        rips_or_peeling=rips,
    )


def sample_box(
    seed: int,
    rates: IssueRates,
    *,
    dependence: float = 0.0,
    active_mould_share: float = 0.5,
    extensive_share: float = 0.0,
) -> PrintCondition:
    """Draw one box condition; identical seeds yield identical conditions.

    `dependence` in [-1, 1] mixes the independent draw with a fully
    comonotone draw (positive values: issues co-occur more) or a disjoint
    draw (negative values: issues spread over more boxes). Marginal rates
    are preserved exactly in both directions. The disjoint mixture needs
    the issue rates to sum to at most 1.
    """
    return sample_boxes(
        1,
        seed,
        rates,
        dependence=dependence,
        active_mould_share=active_mould_share,
        extensive_share=extensive_share,
    )[0]


def sample_boxes(
    n: int,
    seed: int,
    rates: IssueRates,
    *,
    dependence: float = 0.0,
    active_mould_share: float = 0.5,
    extensive_share: float = 0.0,
) -> list[PrintCondition]:
    """Draw `n` box conditions from a single stream seeded with `seed`."""
    if n < 0:
        raise DomainError("sample count must be non-negative")
    if not -1.0 <= dependence <= 1.0:
        raise DomainError(f"dependence must lie in [-1, 1], got {dependence}")
    if dependence < 0.0 and sum(rates.issue_probabilities()) > 1.0:
        raise DomainError("disjoint mixture requires issue rates summing to at most 1")
    if not 0.0 <= active_mould_share <= 1.0:
        raise DomainError("active_mould_share must lie in [0, 1]")
    if not 0.0 <= extensive_share <= 1.0:
        raise DomainError("extensive_share must lie in [0, 1]")
    rng = random.Random(seed)
    return [
        _draw_condition(rng, rates, dependence, active_mould_share, extensive_share)
        for _ in range(n)
    ]


@dataclass(frozen=True)
class ObservedRates:
    """Empirical issue frequencies over a batch of conditions.

    `rips_or_peeling` is the merged frequency of the two damage sources;
    the condition record does not distinguish them.
    """

    n: int
    mould: float
    blocking: float
    cleaning: float
    tape: float
    curling: float
    rips_or_peeling: float
    any_intervention: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mould": self.mould,
            "blocking": self.blocking,
            "cleaning": self.cleaning,
            "tape": self.tape,
            "curling": self.curling,
            "rips_or_peeling": self.rips_or_peeling,
            "any_intervention": self.any_intervention,
        }


def aggregate_rates(conditions: Sequence[PrintCondition]) -> ObservedRates:
    """Empirical per-issue frequencies and the share needing any work."""
    n = len(conditions)
    if n == 0:
        raise DomainError("cannot aggregate an empty list of conditions")
    mould = blocking = cleaning = tape = curling = rips = any_hit = 0
    for c in conditions:
        mould += c.mould is not MouldState.NONE
        blocking += c.blocking
        cleaning += c.silver_dust
        tape += c.annotations_or_adhesives
        curling += c.curling_or_creases
        rips += c.rips_or_peeling is not RipDamage.NONE
        any_hit += c.any_issue
    return ObservedRates(
        n=n,
        mould=mould / n,
        blocking=blocking / n,
        cleaning=cleaning / n,
        tape=tape / n,
        curling=curling / n,
        rips_or_peeling=rips / n,
        any_intervention=any_hit / n,
    )


def all_conditions() -> list[PrintCondition]:
    """Every condition combination (3 mould states x 4 flags x 3 rip states)."""
    out = []
    for mould in MouldState:
        for blocking in (False, True):
            for silver in (False, True):
                for annotations in (False, True):
                    for curling in (False, True):
                        for rips in RipDamage:
                            out.append(
                                PrintCondition(
                                    mould=mould,
                                    blocking=blocking,
                                    silver_dust=silver,
                                    annotations_or_adhesives=annotations,
                                    curling_or_creases=curling,
                                    rips_or_peeling=rips,
                                )
                            )
    return out
