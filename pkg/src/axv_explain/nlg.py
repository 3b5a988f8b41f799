"""Certainty-banded natural language for why / why-not answers.

All phrasing lives in a PhrasingTable so tests can pin exact bytes while a
deployment re-skins the wording without touching logic. Band breakpoints are
0.8 and 0.4, with both boundary values falling in the medium band.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .engine import ScoredBlocker, WhyResult, reason_template
from .model.nodes import AutonomyModel, TemplateText
from .state import MissionState, elapsed_since


class CertaintyBand(Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


def certainty_band(p: float) -> CertaintyBand:
    """Band a probability: high above 0.8, low below 0.4, medium between."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    if p > 0.8:
        return CertaintyBand.HIGH
    if p >= 0.4:
        return CertaintyBand.MEDIUM
    return CertaintyBand.LOW


@dataclass(frozen=True)
class PhrasingTable:
    lead_in_high: str = "It is because"
    lead_in_medium: str = "It is likely because"
    lead_in_low: str = "It is possibly because"
    additional: str = "It may also be that"
    why_not_lead_in: str = "It can't because"
    refusal: str = "I am not confident enough to say."
    no_blockers: str = "No known constraint prevents it."

    def lead_in(self, band: CertaintyBand) -> str:
        if band is CertaintyBand.HIGH:
            return self.lead_in_high
        if band is CertaintyBand.MEDIUM:
            return self.lead_in_medium
        return self.lead_in_low


DEFAULT_PHRASING = PhrasingTable()

_SLOT_RE = re.compile(r"\{([^{}]*)\}")
_ELAPSED_SLOT_RE = re.compile(r"^elapsed_since\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class TemplateRenderError(ValueError):
    """Malformed slot at render time; parsing should have caught it."""


def format_value(value) -> str:
    """Render a state value: numbers in minimal decimal form, booleans as
    true/false."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if value == int(value) and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return str(value)


def format_elapsed(seconds: float) -> str:
    """Duration as "Nh Nm Ns" with zero components omitted; "never" for +inf."""
    if math.isinf(seconds):
        return "never"
    total = int(math.floor(seconds + 0.5))
    hours, rest = divmod(total, 3600)
    minutes, secs = divmod(rest, 60)
    parts = []
    if hours:
        parts.append(f"{hours}h")
    if minutes:
        parts.append(f"{minutes}m")
    if secs or not parts:
        parts.append(f"{secs}s")
    return " ".join(parts)


def render_template(template: TemplateText, state: MissionState) -> str:
    """Fill template slots from the latest mission state.

    An absent variable renders as the literal "unknown" — the answer must
    still read as a sentence even when telemetry is missing.
    """

    def fill(match: re.Match) -> str:
        inner = match.group(1)
        elapsed = _ELAPSED_SLOT_RE.match(inner)
        if elapsed:
            return format_elapsed(elapsed_since(state, elapsed.group(1)))
        if not _IDENT_RE.match(inner):
            raise TemplateRenderError(f"malformed slot '{{{inner}}}'")
        if inner in state.vars:
            return format_value(state.vars[inner])
        return "unknown"

    return _SLOT_RE.sub(fill, template.text)


def _percent(p: float) -> int:
    return int(math.floor(p * 100.0 + 0.5))


def _sentence(lead: str, body: str, p: float, show_numbers: bool) -> str:
    text = f"{lead} {body}"
    if show_numbers:
        text += f" ({_percent(p)}%)"
    return text + "."


def realize_why(
    result: WhyResult,
    model: AutonomyModel,
    state: MissionState,
    show_numbers: bool = True,
    phrasing: PhrasingTable = DEFAULT_PHRASING,
) -> str:
    """Compose the why answer: band lead-in for the top reason, a connective
    for each additional one, refusal text when the policy left nothing."""
    if not result.reasons:
        return phrasing.refusal
    sentences = []
    for i, reason in enumerate(result.reasons):
        body = render_template(reason_template(model, result.behavior_id, reason.reason_id), state)
        lead = phrasing.lead_in(certainty_band(reason.probability)) if i == 0 else phrasing.additional
        sentences.append(_sentence(lead, body, reason.probability, show_numbers))
    return " ".join(sentences)


def realize_why_not(
    blockers: tuple[ScoredBlocker, ...] | list[ScoredBlocker],
    model: AutonomyModel,
    state: MissionState,
    show_numbers: bool = True,
    phrasing: PhrasingTable = DEFAULT_PHRASING,
) -> str:
    """Compose the why-not answer from blocking guards.

    A certain blocker opens with the why-not lead-in; an uncertain one opens
    with its band's lead-in, hedging exactly as a why answer would.
    """
    if not blockers:
        return phrasing.no_blockers
    sentences = []
    for i, blocker in enumerate(blockers):
        behavior = model.behavior(blocker.behavior_id)
        if behavior is None:
            raise ValueError(f"blocker references unknown behavior '{blocker.behavior_id}'")
        guard = behavior.guards[blocker.guard_index]
        body = render_template(guard.explain_template, state)
        if i > 0:
            lead = phrasing.additional
        else:
            band = certainty_band(blocker.block_credence)
            lead = phrasing.why_not_lead_in if band is CertaintyBand.HIGH else phrasing.lead_in(band)
        sentences.append(_sentence(lead, body, blocker.block_credence, show_numbers))
    return " ".join(sentences)
