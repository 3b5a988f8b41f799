"""Mission sessions: one autonomy model plus an evolving state snapshot.

Within a session there is a single writer (event application) and any number
of readers; because MissionState is an immutable value, a reader holding a
snapshot can never observe a partially-applied event. Questions are answered
against the committed snapshot only and never mutate it.
"""

from __future__ import annotations

import asyncio
import uuid
from dataclasses import dataclass, field
from typing import Any

from ..engine import (
    AnswerPolicy,
    CannotExplainError,
    apply_answer_policy,
    explain_why,
    explain_why_not,
    reason_template,
)
from ..model import AutonomyModel
from ..nlg import (
    certainty_band,
    format_value,
    realize_why,
    realize_why_not,
    render_template,
)
from ..query import IntentKind, parse_query
from ..state import MissionEvent, MissionState, ingest_event, new_state

CANNOT_EXPLAIN_TEXT = "I cannot explain that with my current model."


@dataclass(frozen=True)
class Answer:
    intent: str
    behavior: str | None
    answer: str
    items: tuple[dict[str, Any], ...]


@dataclass(frozen=True)
class TranscriptEntry:
    t: float
    question: str
    intent: str
    behavior: str | None
    answer: str
    items: tuple[dict[str, Any], ...]


@dataclass(frozen=True)
class StreamMessage:
    event: str  # "mission_event" | "chat"
    data: dict[str, Any]


def _status_line(state: MissionState) -> str:
    vars_part = (
        ", ".join(f"{name}={format_value(value)}" for name, value in sorted(state.vars.items()))
        or "no telemetry yet"
    )
    text = (
        f"At t={format_value(state.clock)}s, phase {state.phase or 'unknown'}: {vars_part}."
    )
    if state.zones_inside:
        text += f" Inside zones: {', '.join(sorted(state.zones_inside))}."
    return text


def answer_question(
    model: AutonomyModel,
    state: MissionState,
    policy: AnswerPolicy,
    show_numbers: bool,
    text: str,
) -> Answer:
    """Pure question-answering pipeline: parse, infer, realize."""
    intent = parse_query(text, model)

    if intent.kind is IntentKind.WHY:
        try:
            result = apply_answer_policy(explain_why(model, state, intent.behavior_id), policy)
        except CannotExplainError:
            return Answer("why", intent.behavior_id, CANNOT_EXPLAIN_TEXT, ())
        items = tuple(
            {
                "id": r.reason_id,
                "probability": r.probability,
                "band": certainty_band(r.probability).value,
                "text": render_template(
                    reason_template(model, intent.behavior_id, r.reason_id), state
                ),
            }
            for r in result.reasons
        )
        return Answer("why", intent.behavior_id, realize_why(result, model, state, show_numbers), items)

    if intent.kind is IntentKind.WHY_NOT:
        blockers = explain_why_not(model, state, intent.behavior_id)
        behavior = model.behavior(intent.behavior_id)
        items = tuple(
            {
                "id": f"guard_{b.guard_index}",
                "probability": b.block_credence,
                "band": certainty_band(b.block_credence).value,
                "text": render_template(behavior.guards[b.guard_index].explain_template, state),
            }
            for b in blockers
        )
        return Answer(
            "why_not",
            intent.behavior_id,
            realize_why_not(blockers, model, state, show_numbers),
            items,
        )

    if intent.kind is IntentKind.STATUS:
        return Answer("status", None, _status_line(state), ())

    return Answer("unknown", None, intent.note or "", ())


class MissionSession:
    def __init__(
        self,
        session_id: str,
        model: AutonomyModel,
        policy: AnswerPolicy,
        show_numbers: bool,
    ):
        self.id = session_id
        self.model = model
        self.policy = policy
        self.show_numbers = show_numbers
        self.state: MissionState = new_state(0.0)
        self.transcript: list[TranscriptEntry] = []
        self._subscribers: list[asyncio.Queue[StreamMessage]] = []
        self._write_lock = asyncio.Lock()

    # -- event stream -----------------------------------------------------

    def subscribe(self) -> asyncio.Queue[StreamMessage]:
        queue: asyncio.Queue[StreamMessage] = asyncio.Queue()
        self._subscribers.append(queue)
        return queue

    def unsubscribe(self, queue: asyncio.Queue[StreamMessage]) -> None:
        if queue in self._subscribers:
            self._subscribers.remove(queue)

    def _broadcast(self, message: StreamMessage) -> None:
        for queue in self._subscribers:
            queue.put_nowait(message)

    # -- writer path --------------------------------------------------------

    async def apply_event(self, event: MissionEvent) -> MissionState:
        async with self._write_lock:
            self.state = ingest_event(self.state, event)
            snapshot = self.state
        self._broadcast(
            StreamMessage("mission_event", {"t": event.t, "kind": event.kind, "data": dict(event.payload)})
        )
        return snapshot

    # -- reader path ----------------------------------------------------------

    def ask(self, text: str) -> tuple[Answer, TranscriptEntry]:
        snapshot = self.state
        answer = answer_question(self.model, snapshot, self.policy, self.show_numbers, text)
        entry = TranscriptEntry(
            t=snapshot.clock,
            question=text,
            intent=answer.intent,
            behavior=answer.behavior,
            answer=answer.answer,
            items=answer.items,
        )
        self.transcript.append(entry)
        self._broadcast(
            StreamMessage(
                "chat",
                {
                    "t": entry.t,
                    "question": entry.question,
                    "intent": entry.intent,
                    "behavior": entry.behavior,
                    "answer": entry.answer,
                    "items": list(entry.items),
                },
            )
        )
        return answer, entry


@dataclass
class SessionRegistry:
    sessions: dict[str, MissionSession] = field(default_factory=dict)

    def create(self, model: AutonomyModel, policy: AnswerPolicy, show_numbers: bool) -> MissionSession:
        session_id = uuid.uuid4().hex
        session = MissionSession(session_id, model, policy, show_numbers)
        self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> MissionSession | None:
        return self.sessions.get(session_id)
