"""Discrete-event simulation of one robot-tended scanning cell.

One robot arm serves a ring of scanners (two by default). Input hoppers
hold prints face down, interleaved with steel plates; the robot senses the
top of the stack (light print or dark plate), vacuum-lifts prints onto the
scanner bed, magnet-lifts plates across to the output hopper, and unloads
scanned prints. Lid, scan and unload transitions chain off completed prior
events (absolute references), never off timed margins; in the trace every
event names the event that caused it.

Timing model: each robot action happens at the instant its visit starts
and the phase duration covers the arm movement that follows. A sampled
handling time h is split 0.3/0.3/0.4 across the unload, plate-transfer
and pick-and-place phases of one loading cycle, so in steady state one
completed scan consumes exactly h of robot time. Lid actuation is part of
the event chain but consumes no separate time; it is folded into h.

Failures: a hopper pick may fail per attempt; after the retry limit the
cell stops and reports an error, which a worker resolves at the next
attended moment (in-flight scans still finish). An exhausted input hopper
lights a lamp; the robot senses it on the next pick, that scanner idles
awaiting a reload, and the robot keeps serving the others.

Runs are deterministic for a fixed (config, seed, horizon); the clock is
integer milliseconds. Independent runs may execute concurrently.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

from ..errors import ConfigError
from .config import CellConfig
from .throughput import ThroughputReport

MS_PER_SECOND = 1000
WEEK_MS = 7 * 24 * 3600 * MS_PER_SECOND

UNLOAD_SHARE = 0.3
PLATE_SHARE = 0.3
LOAD_SHARE = 0.4
MIN_STALL_RECOVERY_SECONDS = 1.0

IDLE_AWAITING_LOAD = "idle_awaiting_load"
SCANNING = "scanning"
SCANNED_AWAITING_UNLOAD = "scanned_awaiting_unload"
STALLED_ERROR = "stalled_error"
HOPPER_EMPTY_LAMP_ON = "hopper_empty_lamp_on"


@dataclass(frozen=True)
class Event:
    """One trace record; `cause_id` names the earlier event that triggered it."""

    event_id: int
    time_ms: int
    entity: str
    transition: str
    cause_id: int | None


@dataclass(frozen=True)
class SimTrace:
    """Ordered event log of one run plus terminal statistics."""

    events: tuple[Event, ...]
    horizon_ms: int
    scans_completed: int

    CSV_HEADER = "time_ms,entity,transition,cause_event_id"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for e in self.events:
            cause = "" if e.cause_id is None else str(e.cause_id)
            lines.append(f"{e.time_ms},{e.entity},{e.transition},{cause}")
        return "\n".join(lines) + "\n"


class _Pending:
    """Event under construction; ids are assigned after time-sorting."""

    __slots__ = ("time_ms", "entity", "transition", "cause", "order")

    def __init__(self, time_ms: int, entity: str, transition: str, cause: "_Pending | None"):
        self.time_ms = time_ms
        self.entity = entity
        self.transition = transition
        self.cause = cause
        self.order = -1


class _Hopper:
    """Input stack of prints interleaved with plates; plates sit between
    consecutive prints, so a stack of n prints carries n-1 plates and the
    top item is always a print after a (re)load."""

    __slots__ = ("prints", "plates", "next_kind")

    def __init__(self, capacity: int | None):
        if capacity is None:
            self.prints = None
            self.plates = None
        else:
            self.prints = capacity
            self.plates = capacity - 1
        self.next_kind = "print"

    @property
    def unlimited(self) -> bool:
        return self.prints is None

    def take_print(self) -> bool:
        """Remove the top print; True when it was the last one."""
        if self.unlimited:
            self.next_kind = "plate"
            return False
        self.prints -= 1
        self.next_kind = "plate" if self.plates > 0 else "empty"
        return self.prints == 0

    def take_plate(self) -> None:
        if self.unlimited:
            self.next_kind = "print"
            return
        self.plates -= 1
        self.next_kind = "print" if self.prints > 0 else "empty"

    def refill(self, capacity: int) -> None:
        self.prints = capacity
        self.plates = capacity - 1
        self.next_kind = "print"


class _Scanner:
    __slots__ = (
        "index",
        "hopper",
        "bed_scanned",
        "bed_loaded",
        "lid_open",
        "lamp_on",
        "empty_acknowledged",
        "phase",
        "ready_event",
        "lamp_event",
        "output_prints",
        "output_plates",
        "scanning_ms",
        "scans_done",
        "starved_since_ms",
        "starved_ms",
        "reload_scheduled",
    )

    def __init__(self, index: int, capacity: int | None, start_event: _Pending):
        self.index = index
        self.hopper = _Hopper(capacity)
        self.bed_scanned = False
        self.bed_loaded = False
        self.lid_open = True
        self.lamp_on = False
        self.empty_acknowledged = False
        self.phase = IDLE_AWAITING_LOAD
        self.ready_event = start_event
        self.lamp_event: _Pending | None = None
        self.output_prints = 0
        self.output_plates = 0
        self.scanning_ms = 0
        self.scans_done = 0
        self.starved_since_ms: int | None = None
        self.starved_ms = 0
        self.reload_scheduled = False

    @property
    def entity(self) -> str:
        return f"scanner{self.index}"

    @property
    def bed_empty(self) -> bool:
        return not (self.bed_scanned or self.bed_loaded)


class _Simulation:
    def __init__(self, config: CellConfig, seed: int, horizon_ms: int):
        self.config = config
        self.rng = random.Random(seed)
        self.horizon_ms = horizon_ms
        self.pending: list[_Pending] = []
        self.heap: list[tuple[int, int, object]] = []
        self.seq = 0
        self.start_event = self.emit(0, "cell", "program_initiated", None)
        self.scanners = [
            _Scanner(i, config.hopper_capacity, self.start_event)
            for i in range(config.scanners_per_robot)
        ]
        self.robot_free_at_ms = 0
        self.robot_last_event = self.start_event
        self.robot_last_served = -1
        self.robot_busy_ms = 0
        self.stalled = False
        self.stall_since_ms: int | None = None
        self.stall_ms = 0
        self.scans_completed = 0

    # -- plumbing ---------------------------------------------------------

    def emit(self, time_ms: int, entity: str, transition: str, cause: _Pending | None) -> _Pending:
        record = _Pending(time_ms, entity, transition, cause)
        record.order = len(self.pending)
        self.pending.append(record)
        return record

    def schedule(self, time_ms: int, action) -> None:
        heapq.heappush(self.heap, (time_ms, self.seq, action))
        self.seq += 1

    def clip(self, t_ms: int) -> int:
        return min(t_ms, self.horizon_ms)

    def run(self) -> None:
        self.schedule(0, self.dispatch_robot)
        while self.heap:
            time_ms, _, action = heapq.heappop(self.heap)
            if time_ms > self.horizon_ms:
                break
            action(time_ms)

    # -- robot dispatch ---------------------------------------------------

    def wake_robot(self, now_ms: int) -> None:
        if not self.stalled:
            self.schedule(max(now_ms, self.robot_free_at_ms), self.dispatch_robot)

    def dispatch_robot(self, now_ms: int) -> None:
        # visits are emitted atomically ahead of the clock, so a dispatch
        # scheduled by an earlier wake may land inside one; skip it
        if now_ms < self.robot_free_at_ms or self.stalled:
            return
        n = len(self.scanners)
        for offset in range(1, n + 1):
            scanner = self.scanners[(self.robot_last_served + offset) % n]
            if self.start_visit(scanner, now_ms):
                return

    def start_visit(self, scanner: _Scanner, now_ms: int) -> bool:
        if scanner.bed_scanned and scanner.lid_open:
            self.visit_unload(scanner, now_ms)
            return True
        if scanner.bed_empty and scanner.hopper.next_kind == "plate":
            return self.visit_plate(scanner, now_ms)
        if scanner.bed_empty and scanner.hopper.next_kind == "print":
            return self.visit_load(scanner, now_ms)
        if (
            scanner.bed_empty
            and scanner.hopper.next_kind == "empty"
            and not scanner.empty_acknowledged
        ):
            self.visit_empty_check(scanner, now_ms)
            return True
        return False

    def begin_visit(self, scanner: _Scanner, now_ms: int) -> _Pending:
        self.robot_last_served = scanner.index
        enabling = scanner.ready_event
        cause = enabling if enabling.time_ms >= self.robot_last_event.time_ms else self.robot_last_event
        return self.emit(now_ms, "robot", f"arrive@{scanner.entity}", cause)

    def end_visit(self, scanner: _Scanner, start_ms: int, end_ms: int, cause: _Pending) -> None:
        depart = self.emit(end_ms, "robot", f"depart@{scanner.entity}", cause)
        self.robot_last_event = depart
        self.robot_busy_ms += self.clip(end_ms) - self.clip(start_ms)
        self.robot_free_at_ms = end_ms
        self.schedule(end_ms, self.dispatch_robot)

    def phase_duration_ms(self, share: float, now_ms: int) -> int:
        handling = self.config.handling_time.sample(self.rng)
        if self.config.ramp_multiplier != 1.0:
            handling /= self.config.ramp_multiplier ** (now_ms // WEEK_MS)
        return max(0, round(share * handling * MS_PER_SECOND))

    def attempt_lift(self, scanner: _Scanner, kind: str, now_ms: int, cause: _Pending):
        """Run the retry loop for one hopper pick; returns the lift-ok
        event, or None after the final failure (the cell is then stalled)."""
        prev = cause
        for _ in range(self.config.lift_retry_limit):
            attempt = self.emit(now_ms, scanner.entity, f"{kind}_lift_attempt", prev)
            if self.rng.random() < self.config.lift_failure_prob:
                prev = self.emit(now_ms, scanner.entity, f"{kind}_lift_failed", attempt)
            else:
                return self.emit(now_ms, scanner.entity, f"{kind}_lift_ok", attempt)
        self.enter_stall(scanner, now_ms, prev)
        return None

    # -- visit flavours ---------------------------------------------------

    def visit_unload(self, scanner: _Scanner, now_ms: int) -> None:
        arrive = self.begin_visit(scanner, now_ms)
        duration = self.phase_duration_ms(UNLOAD_SHARE, now_ms)
        lifted = self.emit(now_ms, scanner.entity, "print_lifted_from_bed", arrive)
        scanner.bed_scanned = False
        done_ms = now_ms + duration
        unloaded = self.emit(done_ms, scanner.entity, "print_unloaded", lifted)
        scanner.output_prints += 1
        scanner.phase = HOPPER_EMPTY_LAMP_ON if scanner.lamp_on else IDLE_AWAITING_LOAD
        scanner.ready_event = unloaded
        self.update_starved(scanner, done_ms)
        self.end_visit(scanner, now_ms, done_ms, unloaded)

    def visit_plate(self, scanner: _Scanner, now_ms: int) -> bool:
        arrive = self.begin_visit(scanner, now_ms)
        duration = self.phase_duration_ms(PLATE_SHARE, now_ms)
        sense = self.emit(now_ms, scanner.entity, "sense_plate", arrive)
        lift = self.attempt_lift(scanner, "plate", now_ms, sense)
        if lift is None:
            return True
        scanner.hopper.take_plate()
        done_ms = now_ms + duration
        transferred = self.emit(done_ms, scanner.entity, "plate_transferred", lift)
        scanner.output_plates += 1
        scanner.ready_event = transferred
        self.end_visit(scanner, now_ms, done_ms, transferred)
        return True

    def visit_load(self, scanner: _Scanner, now_ms: int) -> bool:
        arrive = self.begin_visit(scanner, now_ms)
        duration = self.phase_duration_ms(LOAD_SHARE, now_ms)
        sense = self.emit(now_ms, scanner.entity, "sense_print", arrive)
        lift = self.attempt_lift(scanner, "print", now_ms, sense)
        if lift is None:
            return True
        was_last = scanner.hopper.take_print()
        if was_last:
            scanner.lamp_on = True
            scanner.lamp_event = self.emit(
                now_ms, scanner.entity, "hopper_empty_lamp_on", lift
            )
            self.schedule_reload(scanner, now_ms)
        done_ms = now_ms + duration
        on_bed = self.emit(done_ms, scanner.entity, "print_on_bed", lift)
        scanner.bed_loaded = True
        clear = self.emit(done_ms, scanner.entity, "robot_clear", on_bed)
        lid = self.emit(done_ms, scanner.entity, "lid_closed", clear)
        scanner.lid_open = False
        started = self.emit(done_ms, scanner.entity, "scan_started", lid)
        scanner.phase = SCANNING
        scan_ms = round(self.config.scan_seconds * MS_PER_SECOND)
        end_ms = done_ms + scan_ms
        scanner.scanning_ms += max(0, self.clip(end_ms) - self.clip(done_ms))
        self.schedule(end_ms, self.make_scan_done(scanner, started))
        self.end_visit(scanner, now_ms, done_ms, started)
        return True

    def visit_empty_check(self, scanner: _Scanner, now_ms: int) -> None:
        arrive = self.begin_visit(scanner, now_ms)
        sense = self.emit(now_ms, scanner.entity, "sense_empty", arrive)
        scanner.empty_acknowledged = True
        scanner.phase = HOPPER_EMPTY_LAMP_ON
        scanner.ready_event = sense
        self.update_starved(scanner, now_ms)
        self.end_visit(scanner, now_ms, now_ms, sense)

    # -- scheduled continuations -----------------------------------------

    def make_scan_done(self, scanner: _Scanner, started: _Pending):
        def scan_done(now_ms: int) -> None:
            done = self.emit(now_ms, scanner.entity, "scan_done", started)
            opened = self.emit(now_ms, scanner.entity, "lid_opened", done)
            scanner.bed_loaded = False
            scanner.bed_scanned = True
            scanner.lid_open = True
            scanner.phase = SCANNED_AWAITING_UNLOAD
            scanner.ready_event = opened
            scanner.scans_done += 1
            self.scans_completed += 1
            self.wake_robot(now_ms)

        return scan_done

    def schedule_reload(self, scanner: _Scanner, now_ms: int) -> None:
        if self.config.hopper_capacity is None or scanner.reload_scheduled:
            return
        worker_at = self.config.attendance.next_present_time(now_ms / MS_PER_SECOND)
        if worker_at == float("inf"):
            return
        done_s = worker_at + self.config.reload_seconds
        done_ms = max(now_ms, round(done_s * MS_PER_SECOND))
        scanner.reload_scheduled = True
        self.schedule(done_ms, self.make_reload_done(scanner))

    def make_reload_done(self, scanner: _Scanner):
        def reload_done(now_ms: int) -> None:
            scanner.hopper.refill(self.config.hopper_capacity)
            scanner.lamp_on = False
            scanner.empty_acknowledged = False
            scanner.reload_scheduled = False
            scanner.phase = IDLE_AWAITING_LOAD
            reloaded = self.emit(
                now_ms, scanner.entity, "hopper_reloaded", scanner.lamp_event
            )
            scanner.ready_event = reloaded
            self.update_starved(scanner, now_ms)
            self.wake_robot(now_ms)

        return reload_done

    def enter_stall(self, scanner: _Scanner, now_ms: int, final_failure: _Pending) -> None:
        error = self.emit(now_ms, "cell", "error_stall", final_failure)
        self.emit(now_ms, "robot", f"depart@{scanner.entity}", error)
        scanner.phase = STALLED_ERROR
        self.robot_last_event = error
        self.robot_free_at_ms = now_ms
        self.stalled = True
        self.stall_since_ms = now_ms
        worker_at = self.config.attendance.next_present_time(now_ms / MS_PER_SECOND)
        if worker_at == float("inf"):
            return
        resume_s = max(worker_at, now_ms / MS_PER_SECOND + MIN_STALL_RECOVERY_SECONDS)
        self.schedule(round(resume_s * MS_PER_SECOND), self.make_stall_over(scanner, error))

    def make_stall_over(self, scanner: _Scanner, error: _Pending):
        def stall_over(now_ms: int) -> None:
            resolved = self.emit(now_ms, "cell", "stall_resolved", error)
            self.stalled = False
            self.stall_ms += self.clip(now_ms) - self.clip(self.stall_since_ms)
            self.stall_since_ms = None
            if scanner.phase == STALLED_ERROR:
                scanner.phase = IDLE_AWAITING_LOAD
            scanner.ready_event = resolved
            self.robot_last_event = resolved
            self.wake_robot(now_ms)

        return stall_over

    # -- accounting -------------------------------------------------------

    def update_starved(self, scanner: _Scanner, now_ms: int) -> None:
        starving = (
            scanner.bed_empty
            and not scanner.hopper.unlimited
            and scanner.hopper.next_kind == "empty"
        )
        if starving and scanner.starved_since_ms is None:
            scanner.starved_since_ms = now_ms
        elif not starving and scanner.starved_since_ms is not None:
            scanner.starved_ms += self.clip(now_ms) - self.clip(scanner.starved_since_ms)
            scanner.starved_since_ms = None

    def finalize_accounting(self) -> None:
        if self.stall_since_ms is not None:
            self.stall_ms += self.horizon_ms - self.clip(self.stall_since_ms)
        for scanner in self.scanners:
            if scanner.starved_since_ms is not None:
                scanner.starved_ms += self.horizon_ms - self.clip(scanner.starved_since_ms)

    def build_trace(self) -> SimTrace:
        kept = [p for p in self.pending if p.time_ms <= self.horizon_ms]
        kept.sort(key=lambda p: (p.time_ms, p.order))
        ids = {id(p): i for i, p in enumerate(kept)}
        events = tuple(
            Event(
                event_id=i,
                time_ms=p.time_ms,
                entity=p.entity,
                transition=p.transition,
                cause_id=None if p.cause is None else ids[id(p.cause)],
            )
            for i, p in enumerate(kept)
        )
        return SimTrace(events, self.horizon_ms, self.scans_completed)

    def build_report(self) -> ThroughputReport:
        hours = self.horizon_ms / MS_PER_SECOND / 3600.0
        n = len(self.scanners)
        per_hour = self.scans_completed / hours if hours > 0 else 0.0
        scanner_busy = sum(s.scanning_ms for s in self.scanners)
        return ThroughputReport(
            mode="simulated",
            scans_per_scanner_hour=per_hour / n,
            scans_per_hour=per_hour,
            scans_per_scanner_week=per_hour / n * 168.0,
            scans_per_worker_week=None,
            scans_completed=self.scans_completed,
            per_scanner_scans=tuple(s.scans_done for s in self.scanners),
            horizon_hours=hours,
            robot_utilization=self.robot_busy_ms / self.horizon_ms if self.horizon_ms else 0.0,
            scanner_utilization=(
                scanner_busy / (n * self.horizon_ms) if self.horizon_ms else 0.0
            ),
            stall_seconds=self.stall_ms / MS_PER_SECOND,
            starved_seconds=sum(s.starved_ms for s in self.scanners) / MS_PER_SECOND,
        )


def simulate(
    config: CellConfig, seed: int, horizon_seconds: float
) -> tuple[SimTrace, ThroughputReport]:
    """Run the cell for `horizon_seconds` of simulated time.

    Deterministic for a fixed (config, seed, horizon). A zero horizon gives
    an empty trace and a zero report; a horizon shorter than one loading
    cycle gives a valid trace with no completed scans.
    """
    if not isinstance(config, CellConfig):
        raise ConfigError("config must be a CellConfig")
    if horizon_seconds < 0:
        raise ConfigError("horizon must be non-negative")
    horizon_ms = round(horizon_seconds * MS_PER_SECOND)
    if horizon_ms == 0:
        trace = SimTrace((), 0, 0)
        report = ThroughputReport(
            mode="simulated",
            scans_per_scanner_hour=0.0,
            scans_per_hour=0.0,
            scans_per_scanner_week=0.0,
            scans_per_worker_week=None,
            scans_completed=0,
            per_scanner_scans=tuple(0 for _ in range(config.scanners_per_robot)),
            horizon_hours=0.0,
            robot_utilization=0.0,
            scanner_utilization=0.0,
        )
        return trace, report
    sim = _Simulation(config, seed, horizon_ms)
    sim.run()
    sim.finalize_accounting()
    return sim.build_trace(), sim.build_report()
