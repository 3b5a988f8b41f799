"""AST types for the autonomy model: behaviors, guards, decision trees, conditions.

Everything here is an immutable value. Structural equality (dataclass equality)
is what the validator and the engine mean when they talk about "the same
condition", so nodes deliberately contain only hashable fields.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DEFAULT_PRIOR = 0.5

COMPARE_OPS = ("<", "<=", ">", ">=", "==", "!=")


# --- condition expressions ---------------------------------------------------


class Condition:
    """Base for boolean expressions evaluated against mission state."""

    __slots__ = ()


class Operand:
    """Base for comparison operands (variables and literals)."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Operand):
    name: str


@dataclass(frozen=True)
class NumberLit(Operand):
    value: float


@dataclass(frozen=True)
class DurationLit(Operand):
    seconds: float


@dataclass(frozen=True)
class TextLit(Operand):
    value: str


@dataclass(frozen=True)
class BoolLit(Operand):
    value: bool


@dataclass(frozen=True)
class ElapsedSince(Operand):
    event_kind: str


@dataclass(frozen=True)
class Compare(Condition):
    left: Operand
    op: str
    right: Operand


@dataclass(frozen=True)
class InZone(Condition):
    zone: str


@dataclass(frozen=True)
class PhaseIs(Condition):
    phase: str


@dataclass(frozen=True)
class And(Condition):
    left: Condition
    right: Condition


@dataclass(frozen=True)
class Or(Condition):
    left: Condition
    right: Condition


@dataclass(frozen=True)
class Not(Condition):
    operand: Condition


# --- NLG templates -----------------------------------------------------------

_SLOT_RE = re.compile(r"\{([^{}]*)\}")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_ELAPSED_SLOT_RE = re.compile(r"^elapsed_since\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)$")


@dataclass(frozen=True)
class TemplateText:
    """Literal text with `{var}` and `{elapsed_since(event)}` slots."""

    text: str

    def slots(self) -> list[str]:
        """Inner text of each slot marker, in order of appearance."""
        return _SLOT_RE.findall(self.text)


def template_slot_error(text: str) -> str | None:
    """Return a description of the first malformed slot marker, or None.

    A marker is well-formed when it is a closed `{...}` whose inner text is
    either an identifier or `elapsed_since(identifier)`. Stray braces count
    as malformed.
    """
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "}":
            return f"unmatched '}}' at offset {i}"
        if ch == "{":
            end = text.find("}", i + 1)
            nxt = text.find("{", i + 1)
            if end == -1 or (nxt != -1 and nxt < end):
                return f"unclosed '{{' at offset {i}"
            inner = text[i + 1 : end]
            if not (_IDENT_RE.match(inner) or _ELAPSED_SLOT_RE.match(inner)):
                return f"invalid slot '{{{inner}}}' at offset {i}"
            i = end + 1
        else:
            i += 1
    return None


# --- behavior trees ----------------------------------------------------------


@dataclass(frozen=True)
class ReasonLeaf:
    reason_id: str
    template: TemplateText


@dataclass(frozen=True)
class NullLeaf:
    """Path on which the behavior would not fire."""


@dataclass(frozen=True)
class DecisionNode:
    condition: Condition
    prior_true: float
    true_child: TreeNode
    false_child: TreeNode


TreeNode = DecisionNode | ReasonLeaf | NullLeaf


@dataclass(frozen=True)
class GuardConstraint:
    """Enabling condition for a behavior; blocks it when not satisfied."""

    condition: Condition
    explain_template: TemplateText
    prior_true: float = DEFAULT_PRIOR


@dataclass(frozen=True)
class BehaviorSpec:
    id: str
    aliases: tuple[str, ...]
    guards: tuple[GuardConstraint, ...]
    tree: TreeNode


@dataclass(frozen=True)
class AutonomyModel:
    behaviors: tuple[BehaviorSpec, ...]
    model_name: str = ""
    version: str = ""

    def behavior(self, behavior_id: str) -> BehaviorSpec | None:
        for b in self.behaviors:
            if b.id == behavior_id:
                return b
        return None

    def behavior_ids(self) -> list[str]:
        return [b.id for b in self.behaviors]


def walk_tree(node: TreeNode, path: str = "root"):
    """Yield (node, path) over a tree in pre-order.

    Paths are dotted strings: "root", "root.T", "root.F.T", ... where T/F is
    the branch taken at each decision node.
    """
    yield node, path
    if isinstance(node, DecisionNode):
        yield from walk_tree(node.true_child, path + ".T")
        yield from walk_tree(node.false_child, path + ".F")


def iter_conditions(node: TreeNode):
    """Conditions of every decision node, pre-order."""
    for n, _ in walk_tree(node):
        if isinstance(n, DecisionNode):
            yield n.condition


def reason_leaves(node: TreeNode) -> list[ReasonLeaf]:
    return [n for n, _ in walk_tree(node) if isinstance(n, ReasonLeaf)]
