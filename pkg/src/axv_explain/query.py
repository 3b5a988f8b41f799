"""Operator utterance parsing: why / why-not / status intents plus behavior
resolution through model aliases.

Matching is deterministic keyword and alias lookup, not statistical NLU: the
interesting part of this system is the explanation engine, and determinism
keeps answers auditable. A learned matcher can replace this behind the same
interface. Gerund/infinitive variants ("surfacing" vs "to surface") are the
model author's job via aliases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .model.nodes import AutonomyModel


class IntentKind(Enum):
    WHY = "why"
    WHY_NOT = "why_not"
    STATUS = "status"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Intent:
    kind: IntentKind
    behavior_id: str | None = None
    matched_alias: str | None = None
    note: str | None = None


# "isn't" loses its apostrophe in normalization and lands on "isnt".
NEGATION_TOKENS = frozenset({"not", "isnt", "hasnt", "wont", "doesnt", "no"})

_PUNCT_RE = re.compile(r"[^\w\s]")

_STATUS_PREFIX = ("what", "are", "you", "doing")


def normalize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace."""
    return _PUNCT_RE.sub("", text.lower()).split()


def _contains(haystack: list[str], needle: list[str]) -> bool:
    if not needle or len(needle) > len(haystack):
        return False
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i : i + len(needle)] == needle:
            return True
    return False


def _resolve_behavior(tokens: list[str], model: AutonomyModel) -> tuple[str, str] | None:
    """Longest alias whose token sequence occurs contiguously in the utterance.

    Ties go to declaration order: behaviors in model order, aliases in the
    order the author wrote them.
    """
    best: tuple[str, str] | None = None
    best_len = 0
    for behavior in model.behaviors:
        for alias in behavior.aliases:
            alias_tokens = normalize(alias)
            if len(alias_tokens) > best_len and _contains(tokens, alias_tokens):
                best = (behavior.id, alias)
                best_len = len(alias_tokens)
    return best


def parse_query(text: str, model: AutonomyModel) -> Intent:
    """Parse an operator utterance. Total: unmatched input is an Unknown
    intent with a help note, never an exception."""
    tokens = normalize(text)
    if not tokens:
        return Intent(IntentKind.UNKNOWN, note=_help_note(model))

    if tokens[0] == "why":
        negated = any(tok in NEGATION_TOKENS for tok in tokens[1:])
        kind = IntentKind.WHY_NOT if negated else IntentKind.WHY
        match = _resolve_behavior(tokens, model)
        if match is None:
            return Intent(
                IntentKind.UNKNOWN,
                note="I couldn't match that question to a behavior I know. " + _help_note(model),
            )
        behavior_id, alias = match
        return Intent(kind, behavior_id=behavior_id, matched_alias=alias)

    if tokens[0] == "status" or tuple(tokens[: len(_STATUS_PREFIX)]) == _STATUS_PREFIX:
        return Intent(IntentKind.STATUS)

    return Intent(IntentKind.UNKNOWN, note=_help_note(model))


def _help_note(model: AutonomyModel) -> str:
    ids = ", ".join(model.behavior_ids()) or "(none)"
    return (
        "Ask a why or why-not question about a behavior, or ask for status. "
        f"Behaviors I can explain: {ids}."
    )
