"""Mission log replay: the stand-in for a live vehicle feed.

Log files are newline-delimited JSON, one event per line:

    {"t": 100.0, "kind": "telemetry", "data": {"depth": 30.0, "battery_pct": 85}}

`replay` paces delivery by mission-time gaps divided by the speed factor;
`speed=inf` delivers immediately. Pacing never changes the resulting state,
only the wall-clock schedule.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .state import MissionEvent

logger = logging.getLogger(__name__)


class LogParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LogOrderError(ValueError):
    def __init__(self, line_no: int, prev_t: float, t: float):
        super().__init__(
            f"line {line_no}: event at t={t} is earlier than the previous event at t={prev_t}"
        )
        self.line_no = line_no
        self.prev_t = prev_t
        self.t = t


class ReplayAborted(RuntimeError):
    def __init__(self, event_index: int, cause: Exception):
        super().__init__(f"sink failed on event #{event_index}: {cause}")
        self.event_index = event_index
        self.cause = cause


@dataclass(frozen=True)
class ReplayReport:
    delivered: int
    wall_seconds: float
    cancelled: bool = False


def parse_log_line(line: str, line_no: int) -> MissionEvent:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LogParseError(line_no, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(record, dict):
        raise LogParseError(line_no, "record must be a JSON object")
    t = record.get("t")
    kind = record.get("kind")
    data = record.get("data", {})
    if not isinstance(t, (int, float)) or isinstance(t, bool):
        raise LogParseError(line_no, "field 't' must be a number of seconds")
    if not isinstance(kind, str) or not kind:
        raise LogParseError(line_no, "field 'kind' must be a non-empty string")
    if not isinstance(data, dict):
        raise LogParseError(line_no, "field 'data' must be an object")
    try:
        return MissionEvent(t=float(t), kind=kind, payload=data)
    except ValueError as exc:
        raise LogParseError(line_no, str(exc)) from exc


def load_log(path: str | Path) -> list[MissionEvent]:
    """Read a mission log, checking timestamps are non-decreasing."""
    events: list[MissionEvent] = []
    prev_t: float | None = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            event = parse_log_line(line, line_no)
            if prev_t is not None and event.t < prev_t:
                raise LogOrderError(line_no, prev_t, event.t)
            prev_t = event.t
            events.append(event)
    return events


def dump_log(events: Iterable[MissionEvent]) -> str:
    lines = [
        json.dumps({"t": e.t, "kind": e.kind, "data": dict(e.payload)}, sort_keys=True)
        for e in events
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def gen_demo_mission() -> list[MissionEvent]:
    """Canned mission driving the canonical scenarios.

    Early on (around t=500) the battery level is still unknown, so a "why is
    it surfacing" query yields two hedged reasons; by t=1400 telemetry has
    resolved everything and the same query yields one certain reason. The
    no-surface zone entered at t=700 is what blocks a GPS fix around t=800.
    The surfaced event carries depth so that the zone stays the only blocker.
    """
    return [
        MissionEvent(t=0.0, kind="phase_change", payload={"phase": "transit"}),
        MissionEvent(t=50.0, kind="gps_fix", payload={}),
        MissionEvent(t=100.0, kind="telemetry", payload={"depth": 30.0}),
        MissionEvent(t=450.0, kind="surfaced", payload={"depth": 0.0}),
        MissionEvent(t=600.0, kind="telemetry", payload={"battery_pct": 85.0}),
        MissionEvent(t=700.0, kind="zone_entered", payload={"zone": "no_surface"}),
        MissionEvent(t=1400.0, kind="surfaced", payload={"depth": 0.0}),
    ]


def replay(
    events: list[MissionEvent],
    speed_factor: float,
    sink: Callable[[MissionEvent], None],
    should_cancel: Callable[[], bool] | None = None,
) -> ReplayReport:
    """Deliver events to `sink` paced at mission-time / speed_factor.

    Cancellation is honored between deliveries. A sink exception aborts the
    replay, identifying the failing event index.
    """
    if not speed_factor > 0:
        raise ValueError(f"speed_factor must be positive, got {speed_factor!r}")
    start = time.perf_counter()
    delivered = 0
    prev_t: float | None = None
    for index, event in enumerate(events):
        if should_cancel is not None and should_cancel():
            return ReplayReport(delivered, time.perf_counter() - start, cancelled=True)
        if prev_t is not None and not math.isinf(speed_factor):
            gap = (event.t - prev_t) / speed_factor
            if gap > 0:
                time.sleep(gap)
        prev_t = event.t
        try:
            sink(event)
        except Exception as exc:
            raise ReplayAborted(index, exc) from exc
        delivered += 1
    wall = time.perf_counter() - start
    logger.info("replay complete: %d events in %.3fs", delivered, wall)
    return ReplayReport(delivered, wall)
