"""Mission state: variable store, event history, and three-valued evaluation.

State is a value: ingesting an event returns a new snapshot, so a session can
keep one writer folding events while readers hold consistent snapshots.
Conditions evaluate under Kleene's strong three-valued logic — a comparison
touching an absent variable is Unknown, never an error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping

from .model.nodes import (
    And,
    BoolLit,
    Compare,
    Condition,
    DurationLit,
    ElapsedSince,
    InZone,
    Not,
    NumberLit,
    Operand,
    Or,
    PhaseIs,
    TextLit,
    Var,
)
from .model.serialize import serialize_condition

logger = logging.getLogger(__name__)

ZONE_ENTERED = "zone_entered"
ZONE_EXITED = "zone_exited"
PHASE_CHANGE = "phase_change"


class TruthValue(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


def truth_from_bool(b: bool) -> TruthValue:
    return TruthValue.TRUE if b else TruthValue.FALSE


def kleene_not(x: TruthValue) -> TruthValue:
    if x is TruthValue.TRUE:
        return TruthValue.FALSE
    if x is TruthValue.FALSE:
        return TruthValue.TRUE
    return TruthValue.UNKNOWN


def kleene_and(x: TruthValue, y: TruthValue) -> TruthValue:
    if x is TruthValue.FALSE or y is TruthValue.FALSE:
        return TruthValue.FALSE
    if x is TruthValue.UNKNOWN or y is TruthValue.UNKNOWN:
        return TruthValue.UNKNOWN
    return TruthValue.TRUE


def kleene_or(x: TruthValue, y: TruthValue) -> TruthValue:
    if x is TruthValue.TRUE or y is TruthValue.TRUE:
        return TruthValue.TRUE
    if x is TruthValue.UNKNOWN or y is TruthValue.UNKNOWN:
        return TruthValue.UNKNOWN
    return TruthValue.FALSE


class OutOfOrderEventError(ValueError):
    """Event timestamp earlier than the mission clock."""

    def __init__(self, event_t: float, clock: float):
        super().__init__(
            f"event at t={event_t} arrived after the mission clock reached t={clock};"
            " timestamps must be non-decreasing"
        )
        self.event_t = event_t
        self.clock = clock


@dataclass(frozen=True)
class MissionEvent:
    """One timestamped record from the vehicle feed.

    `kind` is an open identifier (telemetry, gps_fix, surfaced, dived,
    zone_entered, zone_exited, phase_change, fault, or anything custom).
    """

    t: float
    kind: str
    payload: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"event timestamp must be >= 0, got {self.t}")
        if not self.kind:
            raise ValueError("event kind must be non-empty")


@dataclass(frozen=True)
class MissionState:
    clock: float
    vars: Mapping[str, Any]
    history: tuple[MissionEvent, ...]
    zones_inside: frozenset[str]
    phase: str | None
    last_event_at: Mapping[str, float]
    start_known: bool = True


@dataclass(frozen=True)
class EvalDiagnostic:
    """Recorded when evaluation degrades to Unknown instead of failing."""

    message: str
    condition: Condition


def new_state(start: float = 0.0) -> MissionState:
    return MissionState(
        clock=start,
        vars=MappingProxyType({}),
        history=(),
        zones_inside=frozenset(),
        phase=None,
        last_event_at=MappingProxyType({}),
    )


def ingest_event(state: MissionState, event: MissionEvent) -> MissionState:
    """Fold one event into the state, returning the new snapshot.

    Timestamps must be non-decreasing; there is no reordering buffer, so a
    late event is rejected rather than silently merged.
    """
    if event.t < state.clock:
        raise OutOfOrderEventError(event.t, state.clock)

    vars_ = dict(state.vars)
    vars_.update(event.payload)

    zones = state.zones_inside
    if event.kind == ZONE_ENTERED:
        zone = event.payload.get("zone")
        if zone is not None:
            zones = zones | {str(zone)}
    elif event.kind == ZONE_EXITED:
        zone = event.payload.get("zone")
        if zone is not None:
            zones = zones - {str(zone)}

    phase = state.phase
    if event.kind == PHASE_CHANGE:
        new_phase = event.payload.get("phase")
        if new_phase is not None:
            phase = str(new_phase)

    last = dict(state.last_event_at)
    last[event.kind] = event.t

    return MissionState(
        clock=event.t,
        vars=MappingProxyType(vars_),
        history=state.history + (event,),
        zones_inside=zones,
        phase=phase,
        last_event_at=MappingProxyType(last),
        start_known=state.start_known,
    )


def elapsed_since(state: MissionState, kind: str) -> float:
    """Seconds since the latest event of `kind`, or +inf if none ever occurred.

    Mission start is always known to the session, so "never happened" is a
    certainty (+inf), not an unknown: an overdue-check condition like
    `elapsed_since(gps_fix) > 1200s` resolves True before the first fix.
    """
    t = state.last_event_at.get(kind)
    if t is None:
        return math.inf
    return state.clock - t


# --- condition evaluation ------------------------------------------------

_ABSENT = object()


def _operand_value(op: Operand, state: MissionState):
    if isinstance(op, Var):
        return state.vars.get(op.name, _ABSENT)
    if isinstance(op, NumberLit):
        return op.value
    if isinstance(op, DurationLit):
        return op.seconds
    if isinstance(op, TextLit):
        return op.value
    if isinstance(op, BoolLit):
        return op.value
    if isinstance(op, ElapsedSince):
        return elapsed_since(state, op.event_kind)
    raise TypeError(f"not an operand: {op!r}")


def _kind_of(value: Any) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, (int, float)):
        return "num"
    if isinstance(value, str):
        return "text"
    return "other"


_NUM_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def _record(diagnostics: list[EvalDiagnostic] | None, message: str, cond: Condition) -> None:
    if diagnostics is not None:
        diagnostics.append(EvalDiagnostic(message, cond))
    logger.debug("condition degraded to Unknown: %s (%s)", message, serialize_condition(cond))


def _eval_compare(
    cond: Compare, state: MissionState, diagnostics: list[EvalDiagnostic] | None
) -> TruthValue:
    left = _operand_value(cond.left, state)
    right = _operand_value(cond.right, state)
    if left is _ABSENT or right is _ABSENT:
        return TruthValue.UNKNOWN

    lk, rk = _kind_of(left), _kind_of(right)
    if lk != rk or lk == "other":
        _record(diagnostics, f"cannot compare {lk} value with {rk} value", cond)
        return TruthValue.UNKNOWN
    if lk == "num":
        return truth_from_bool(_NUM_OPS[cond.op](left, right))
    # text / bool support equality only
    if cond.op == "==":
        return truth_from_bool(left == right)
    if cond.op == "!=":
        return truth_from_bool(left != right)
    _record(diagnostics, f"ordering comparison '{cond.op}' not defined for {lk} values", cond)
    return TruthValue.UNKNOWN


def eval_condition(
    cond: Condition,
    state: MissionState,
    diagnostics: list[EvalDiagnostic] | None = None,
) -> TruthValue:
    """Evaluate a condition under partial knowledge.

    Kleene strong logic: False dominates `and`, True dominates `or`, `not`
    swaps True/False and fixes Unknown. Zone membership is always known
    (default: inside nothing); a phase comparison is Unknown until the first
    phase_change. Type mismatches degrade to Unknown with a recorded
    diagnostic — a live assistant must not crash on a malformed field.
    """
    if isinstance(cond, Compare):
        return _eval_compare(cond, state, diagnostics)
    if isinstance(cond, InZone):
        return truth_from_bool(cond.zone in state.zones_inside)
    if isinstance(cond, PhaseIs):
        if state.phase is None:
            return TruthValue.UNKNOWN
        return truth_from_bool(state.phase == cond.phase)
    if isinstance(cond, And):
        return kleene_and(
            eval_condition(cond.left, state, diagnostics),
            eval_condition(cond.right, state, diagnostics),
        )
    if isinstance(cond, Or):
        return kleene_or(
            eval_condition(cond.left, state, diagnostics),
            eval_condition(cond.right, state, diagnostics),
        )
    if isinstance(cond, Not):
        return kleene_not(eval_condition(cond.operand, state, diagnostics))
    raise TypeError(f"not a condition: {cond!r}")
