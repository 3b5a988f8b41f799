"""HTTP API: create missions, ingest events, ask questions, stream updates.

Paths:
    POST /api/missions                  create a mission session
    POST /api/missions/{id}/events      ingest one mission event
    POST /api/missions/{id}/ask         ask a why / why-not / status question
    GET  /api/missions/{id}/state       current snapshot
    GET  /api/missions/{id}/events      event history (timeline seeding)
    GET  /api/missions/{id}/transcript  question/answer history
    GET  /api/missions/{id}/stream      server-sent events (mission_event, chat)
    GET  /                              operator UI (built frontend, or a fallback page)
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..engine import AnswerPolicy
from ..model import has_errors, parse_model, validate_model
from ..model.grammar import ModelSyntaxError
from ..state import MissionEvent, OutOfOrderEventError
from .schemas import (
    AnswerItem,
    AskRequest,
    AskResponse,
    CreateMissionRequest,
    CreateMissionResponse,
    EventAck,
    EventHistoryResponse,
    EventIn,
    EventOut,
    StateResponse,
    TranscriptEntryOut,
    TranscriptResponse,
)
from .sessions import MissionSession, SessionRegistry

logger = logging.getLogger(__name__)

_FALLBACK_PAGE = """<!doctype html>
<html>
<head><meta charset="utf-8"><title>AxV explanation service</title></head>
<body>
<h1>AxV explanation service</h1>
<p>The service is running. The operator UI has not been built; build the
frontend and restart with <code>--ui-dir</code>, or use the HTTP API under
<code>/api</code>.</p>
</body>
</html>
"""


def _resolve_ui_dir(ui_dir: str | Path | None) -> Path | None:
    if ui_dir is not None:
        path = Path(ui_dir)
        return path if (path / "index.html").is_file() else None
    default = Path("frontend") / "dist"
    return default if (default / "index.html").is_file() else None


def create_app(
    ui_dir: str | Path | None = None,
    transcript_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="AxV explanation service", version="0.1.0")
    registry = SessionRegistry()
    app.state.registry = registry
    transcripts = Path(transcript_dir) if transcript_dir else None
    if transcripts:
        transcripts.mkdir(parents=True, exist_ok=True)

    def require_session(mission_id: str) -> MissionSession:
        session = registry.get(mission_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown mission '{mission_id}'")
        return session

    @app.post("/api/missions", response_model=CreateMissionResponse)
    async def create_mission(req: CreateMissionRequest) -> CreateMissionResponse:
        try:
            model = parse_model(req.model)
        except ModelSyntaxError as exc:
            raise HTTPException(
                status_code=400,
                detail={"message": exc.reason, "line": exc.line, "col": exc.col},
            )
        diagnostics = validate_model(model)
        if has_errors(diagnostics):
            raise HTTPException(
                status_code=400,
                detail={"diagnostics": [str(d) for d in diagnostics]},
            )
        policy = AnswerPolicy(mode=req.policy.mode, threshold=req.policy.threshold)
        session = registry.create(model, policy, req.show_numbers)
        logger.info("mission %s created (%d behaviors)", session.id, len(model.behaviors))
        return CreateMissionResponse(
            mission_id=session.id,
            warnings=[str(d) for d in diagnostics],
        )

    @app.post("/api/missions/{mission_id}/events", response_model=EventAck)
    async def post_event(mission_id: str, event: EventIn) -> EventAck:
        session = require_session(mission_id)
        try:
            snapshot = await session.apply_event(
                MissionEvent(t=event.t, kind=event.kind, payload=event.data)
            )
        except OutOfOrderEventError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return EventAck(ok=True, clock=snapshot.clock)

    @app.post("/api/missions/{mission_id}/ask", response_model=AskResponse)
    async def ask(mission_id: str, req: AskRequest) -> AskResponse:
        session = require_session(mission_id)
        answer, entry = session.ask(req.text)
        if transcripts:
            path = transcripts / f"{mission_id}.ndjson"
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.__dict__, default=list, sort_keys=True) + "\n")
        return AskResponse(
            intent=answer.intent,
            behavior=answer.behavior,
            answer=answer.answer,
            items=[AnswerItem(**item) for item in answer.items],
        )

    @app.get("/api/missions/{mission_id}/state", response_model=StateResponse)
    async def get_state(mission_id: str) -> StateResponse:
        state = require_session(mission_id).state
        return StateResponse(
            clock=state.clock,
            phase=state.phase,
            vars=dict(state.vars),
            zones=sorted(state.zones_inside),
        )

    @app.get("/api/missions/{mission_id}/events", response_model=EventHistoryResponse)
    async def get_events(mission_id: str) -> EventHistoryResponse:
        state = require_session(mission_id).state
        return EventHistoryResponse(
            mission_id=mission_id,
            events=[EventOut(t=e.t, kind=e.kind, data=dict(e.payload)) for e in state.history],
        )

    @app.get("/api/missions/{mission_id}/transcript", response_model=TranscriptResponse)
    async def get_transcript(mission_id: str) -> TranscriptResponse:
        session = require_session(mission_id)
        return TranscriptResponse(
            mission_id=mission_id,
            entries=[
                TranscriptEntryOut(
                    t=e.t,
                    question=e.question,
                    intent=e.intent,
                    behavior=e.behavior,
                    answer=e.answer,
                    items=[AnswerItem(**item) for item in e.items],
                )
                for e in session.transcript
            ],
        )

    @app.get("/api/missions/{mission_id}/stream")
    async def stream(mission_id: str) -> StreamingResponse:
        session = require_session(mission_id)
        queue = session.subscribe()

        async def event_source():
            try:
                yield "event: ready\ndata: {}\n\n"
                while True:
                    message = await queue.get()
                    yield f"event: {message.event}\ndata: {json.dumps(message.data)}\n\n"
            finally:
                session.unsubscribe(queue)

        return StreamingResponse(
            event_source(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    resolved_ui = _resolve_ui_dir(ui_dir)
    if resolved_ui is not None:
        app.mount("/", StaticFiles(directory=resolved_ui, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse, include_in_schema=False)
        async def index() -> str:
            return _FALLBACK_PAGE

    return app
