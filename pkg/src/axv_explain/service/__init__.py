"""Chat service: session-scoped HTTP API over the explanation engine."""

from .app import create_app
from .sessions import Answer, MissionSession, SessionRegistry, answer_question

__all__ = ["Answer", "MissionSession", "SessionRegistry", "answer_question", "create_app"]
