"""Model validation: everything the parser accepts but the engine cannot honor.

The parser and validator split responsibilities: the parser rejects text that
is not in the grammar (plus duplicate behavior ids and aliases), while the
validator reports semantic problems on structurally well-formed models.
Duplicate conditions inside one tree are rejected because the engine's
two-branch propagation is exact only when each unknown condition appears once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nodes import (
    And,
    AutonomyModel,
    Compare,
    Condition,
    DecisionNode,
    ElapsedSince,
    Not,
    Or,
    ReasonLeaf,
    TemplateText,
    Var,
    walk_tree,
)
from .serialize import serialize_condition

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    behavior_id: str | None = None

    def __str__(self) -> str:
        where = f" [{self.behavior_id}]" if self.behavior_id else ""
        return f"{self.severity}{where}: {self.message}"


def _iter_operands(cond: Condition):
    if isinstance(cond, Compare):
        yield cond.left
        yield cond.right
    elif isinstance(cond, (And, Or)):
        yield from _iter_operands(cond.left)
        yield from _iter_operands(cond.right)
    elif isinstance(cond, Not):
        yield from _iter_operands(cond.operand)


def _known_names(model: AutonomyModel) -> tuple[set[str], set[str]]:
    """Variable names and event kinds referenced anywhere in the model."""
    variables: set[str] = set()
    kinds: set[str] = set()
    conditions: list[Condition] = []
    for b in model.behaviors:
        conditions.extend(g.condition for g in b.guards)
        for node, _ in walk_tree(b.tree):
            if isinstance(node, DecisionNode):
                conditions.append(node.condition)
    for cond in conditions:
        for op in _iter_operands(cond):
            if isinstance(op, Var):
                variables.add(op.name)
            elif isinstance(op, ElapsedSince):
                kinds.add(op.event_kind)
    return variables, kinds


def _check_template(
    template: TemplateText,
    where: str,
    behavior_id: str,
    variables: set[str],
    kinds: set[str],
    out: list[Diagnostic],
) -> None:
    for slot in template.slots():
        if slot.startswith("elapsed_since"):
            kind = slot[len("elapsed_since(") : -1].strip()
            if kind not in kinds:
                out.append(
                    Diagnostic(
                        WARNING,
                        "unknown-template-variable",
                        f"{where} references event kind '{kind}' that appears in no condition",
                        behavior_id,
                    )
                )
        elif slot not in variables:
            out.append(
                Diagnostic(
                    WARNING,
                    "unknown-template-variable",
                    f"{where} references variable '{slot}' that appears in no condition",
                    behavior_id,
                )
            )


def _check_prior(prior: float, where: str, behavior_id: str, out: list[Diagnostic]) -> None:
    if not (0.0 < prior < 1.0):
        out.append(
            Diagnostic(
                ERROR,
                "prior-out-of-range",
                f"{where} has prior {prior!r}; priors must lie strictly inside (0, 1)",
                behavior_id,
            )
        )


def validate_model(model: AutonomyModel) -> list[Diagnostic]:
    """Return every violation found; an empty list means the model is clean.

    Errors: duplicate condition within a tree, prior outside (0, 1), tree
    without a reason leaf. Warnings: template slot naming a variable or event
    kind that no condition mentions (variables are dynamic, so this is only
    suspicious, not fatal).
    """
    diagnostics: list[Diagnostic] = []
    variables, kinds = _known_names(model)

    for b in model.behaviors:
        seen: dict[Condition, str] = {}
        reason_count = 0
        for node, path in walk_tree(b.tree):
            if isinstance(node, DecisionNode):
                first = seen.get(node.condition)
                if first is not None:
                    unreachable = path.startswith(first + ".")
                    note = " (one branch is unreachable)" if unreachable else ""
                    diagnostics.append(
                        Diagnostic(
                            ERROR,
                            "duplicate-condition",
                            f"condition `{serialize_condition(node.condition)}` appears at"
                            f" {first} and {path}{note}",
                            b.id,
                        )
                    )
                else:
                    seen[node.condition] = path
                _check_prior(node.prior_true, f"decision node at {path}", b.id, diagnostics)
            elif isinstance(node, ReasonLeaf):
                reason_count += 1
                _check_template(
                    node.template,
                    f"template of reason '{node.reason_id}'",
                    b.id,
                    variables,
                    kinds,
                    diagnostics,
                )
        if reason_count == 0:
            diagnostics.append(
                Diagnostic(
                    ERROR,
                    "no-reason-leaf",
                    "tree has no reason leaf, so the behavior can never be explained",
                    b.id,
                )
            )
        for i, g in enumerate(b.guards):
            _check_prior(g.prior_true, f"guard {i}", b.id, diagnostics)
            _check_template(
                g.explain_template, f"template of guard {i}", b.id, variables, kinds, diagnostics
            )
    return diagnostics


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diagnostics)
