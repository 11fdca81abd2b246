"""Structural checks over simulation traces.

Replays a trace independently of the engine's internal state and reports
violations of the cell's physical invariants: conservation of prints and
plates, single-robot mutual exclusion, non-decreasing event times,
absolute-reference causality, and non-overlapping scan intervals.
"""
from __future__ import annotations

import re

from .config import CellConfig
from .sim import SimTrace

_ROBOT_VISIT = re.compile(r"^(arrive|depart)@(scanner\d+)$")


def check_trace_invariants(trace: SimTrace, config: CellConfig) -> list[str]:
    """Replay a trace and return human-readable violations (empty = clean)."""
    violations: list[str] = []
    events = trace.events

    last_time = -1
    for e in events:
        if e.time_ms < last_time:
            violations.append(f"event {e.event_id} time went backwards")
        last_time = e.time_ms

    for i, e in enumerate(events):
        if e.event_id != i:
            violations.append(f"event ids not positional at index {i}")
            break

    for e in events:
        if e.cause_id is None:
            if e.transition != "program_initiated":
                violations.append(f"event {e.event_id} ({e.transition}) lacks a cause")
            continue
        if not 0 <= e.cause_id < len(events):
            violations.append(f"event {e.event_id} cause out of range")
            continue
        cause = events[e.cause_id]
        if cause.event_id >= e.event_id:
            violations.append(f"event {e.event_id} caused by a later event")
        if cause.time_ms > e.time_ms:
            violations.append(f"event {e.event_id} caused by a later-timed event")

    violations.extend(_check_conservation(trace, config))
    violations.extend(_check_robot_exclusion(trace))
    violations.extend(_check_scan_intervals(trace))
    return violations


def _check_conservation(trace: SimTrace, config: CellConfig) -> list[str]:
    if config.hopper_capacity is None:
        return []
    capacity = config.hopper_capacity
    n = config.scanners_per_robot
    prints_total = n * capacity
    plates_total = n * (capacity - 1)

    prints_input = {f"scanner{i}": capacity for i in range(n)}
    plates_input = {f"scanner{i}": capacity - 1 for i in range(n)}
    prints_transit = plates_transit = 0
    prints_bed = {f"scanner{i}": 0 for i in range(n)}
    prints_out = plates_out = 0
    violations: list[str] = []

    for e in trace.events:
        t = e.transition
        k = e.entity
        if t == "print_lift_ok":
            prints_input[k] -= 1
            prints_transit += 1
        elif t == "print_on_bed":
            prints_transit -= 1
            prints_bed[k] += 1
        elif t == "print_lifted_from_bed":
            prints_bed[k] -= 1
            prints_transit += 1
        elif t == "print_unloaded":
            prints_transit -= 1
            prints_out += 1
        elif t == "plate_lift_ok":
            plates_input[k] -= 1
            plates_transit += 1
        elif t == "plate_transferred":
            plates_transit -= 1
            plates_out += 1
        elif t == "hopper_reloaded":
            prints_input[k] += capacity
            plates_input[k] += capacity - 1
            prints_total += capacity
            plates_total += capacity - 1
        else:
            continue
        held_prints = (
            sum(prints_input.values()) + prints_transit + sum(prints_bed.values()) + prints_out
        )
        held_plates = sum(plates_input.values()) + plates_transit + plates_out
        if held_prints != prints_total:
            violations.append(
                f"print conservation broken after event {e.event_id}: "
                f"{held_prints} != {prints_total}"
            )
            break
        if held_plates != plates_total:
            violations.append(
                f"plate conservation broken after event {e.event_id}: "
                f"{held_plates} != {plates_total}"
            )
            break
        if any(v < 0 for v in prints_input.values()) or prints_transit < 0:
            violations.append(f"negative print count after event {e.event_id}")
            break
    return violations


def _check_robot_exclusion(trace: SimTrace) -> list[str]:
    violations: list[str] = []
    open_since: int | None = None
    last_depart = -1
    for e in trace.events:
        if e.entity != "robot":
            continue
        match = _ROBOT_VISIT.match(e.transition)
        if not match:
            violations.append(f"unknown robot transition {e.transition!r}")
            continue
        verb = match.group(1)
        if verb == "arrive":
            if open_since is not None:
                violations.append(f"robot arrived twice without departing (event {e.event_id})")
                break
            if e.time_ms < last_depart:
                violations.append(f"robot visit overlaps previous one (event {e.event_id})")
                break
            open_since = e.time_ms
        else:
            if open_since is None:
                violations.append(f"robot departed without arriving (event {e.event_id})")
                break
            last_depart = e.time_ms
            open_since = None
    return violations


def _check_scan_intervals(trace: SimTrace) -> list[str]:
    violations: list[str] = []
    scanning: dict[str, int | None] = {}
    lid_closed: dict[str, bool] = {}
    for e in trace.events:
        if e.transition == "lid_closed":
            lid_closed[e.entity] = True
        elif e.transition == "lid_opened":
            if scanning.get(e.entity) is not None:
                violations.append(f"lid opened mid-scan on {e.entity} (event {e.event_id})")
                break
            lid_closed[e.entity] = False
        elif e.transition == "scan_started":
            if scanning.get(e.entity) is not None:
                violations.append(f"overlapping scans on {e.entity} (event {e.event_id})")
                break
            if not lid_closed.get(e.entity, False):
                violations.append(f"scan started with lid open on {e.entity} (event {e.event_id})")
                break
            scanning[e.entity] = e.time_ms
        elif e.transition == "scan_done":
            if scanning.get(e.entity) is None:
                violations.append(f"scan finished without starting on {e.entity}")
                break
            scanning[e.entity] = None
    return violations
