"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class PolicyIn(BaseModel):
    mode: Literal["complete", "sound"] = "complete"
    threshold: float = Field(default=0.8, ge=0.0, le=1.0)


class CreateMissionRequest(BaseModel):
    model: str = Field(description="Autonomy model DSL source")
    policy: PolicyIn = Field(default_factory=PolicyIn)
    show_numbers: bool = True


class CreateMissionResponse(BaseModel):
    mission_id: str
    warnings: list[str] = []


class EventIn(BaseModel):
    t: float = Field(ge=0.0)
    kind: str = Field(min_length=1)
    data: dict[str, Any] = Field(default_factory=dict)


class EventAck(BaseModel):
    ok: bool
    clock: float


class AskRequest(BaseModel):
    text: str


class AnswerItem(BaseModel):
    id: str
    probability: float
    band: str
    text: str


class AskResponse(BaseModel):
    intent: str
    behavior: str | None
    answer: str
    items: list[AnswerItem]


class StateResponse(BaseModel):
    clock: float
    phase: str | None
    vars: dict[str, Any]
    zones: list[str]


class TranscriptEntryOut(BaseModel):
    t: float
    question: str
    intent: str
    behavior: str | None
    answer: str
    items: list[AnswerItem]


class TranscriptResponse(BaseModel):
    mission_id: str
    entries: list[TranscriptEntryOut]


class EventOut(BaseModel):
    t: float
    kind: str
    data: dict[str, Any]


class EventHistoryResponse(BaseModel):
    mission_id: str
    events: list[EventOut]
