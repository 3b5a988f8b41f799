"""On-demand why / why-not explanations for remote autonomous vehicles.

An expert-authored autonomy model (guarded decision trees over mission-state
conditions) is queried against live or replayed telemetry; answers come with
probabilities and certainty-banded wording, served over a chat-style HTTP API.
"""

from .engine import (
    AnswerPolicy,
    CannotExplainError,
    EnumerationLimitError,
    ScoredBlocker,
    ScoredReason,
    UnknownBehaviorError,
    WhyResult,
    apply_answer_policy,
    enumerate_explain,
    explain_why,
    explain_why_not,
)
from .model import (
    AutonomyModel,
    BehaviorSpec,
    Diagnostic,
    ModelSyntaxError,
    parse_condition,
    parse_model,
    serialize_model,
    validate_model,
)
from .nlg import (
    CertaintyBand,
    PhrasingTable,
    certainty_band,
    realize_why,
    realize_why_not,
    render_template,
)
from .query import Intent, IntentKind, normalize, parse_query
from .sim import gen_demo_mission, load_log, replay
from .state import (
    MissionEvent,
    MissionState,
    OutOfOrderEventError,
    TruthValue,
    elapsed_since,
    eval_condition,
    ingest_event,
    new_state,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerPolicy",
    "AutonomyModel",
    "BehaviorSpec",
    "CannotExplainError",
    "CertaintyBand",
    "Diagnostic",
    "EnumerationLimitError",
    "Intent",
    "IntentKind",
    "MissionEvent",
    "MissionState",
    "ModelSyntaxError",
    "OutOfOrderEventError",
    "PhrasingTable",
    "ScoredBlocker",
    "ScoredReason",
    "TruthValue",
    "UnknownBehaviorError",
    "WhyResult",
    "apply_answer_policy",
    "certainty_band",
    "elapsed_since",
    "enumerate_explain",
    "eval_condition",
    "explain_why",
    "explain_why_not",
    "gen_demo_mission",
    "ingest_event",
    "load_log",
    "new_state",
    "normalize",
    "parse_condition",
    "parse_model",
    "parse_query",
    "realize_why",
    "realize_why_not",
    "render_template",
    "replay",
    "serialize_model",
    "validate_model",
]
