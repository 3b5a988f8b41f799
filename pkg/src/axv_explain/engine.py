"""Why / why-not inference over guarded decision trees under partial evidence.

The why calculus is mass propagation: walk the tree from the root carrying
probability mass, resolve each decision node against the mission state, and
split by the author's prior wherever the state leaves a condition Unknown.
Mass landing on null leaves (paths where the behavior would not fire) is
dropped and the rest renormalized — the operator saw the behavior happen, so
we condition on "some reason applies". `enumerate_explain` recomputes the
same distribution by brute force over every assignment of the unknown
conditions; the two must agree exactly, which is why duplicate conditions
inside one tree are banned at validation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

from .model.nodes import (
    AutonomyModel,
    BehaviorSpec,
    Condition,
    DecisionNode,
    NullLeaf,
    ReasonLeaf,
    TemplateText,
    TreeNode,
)
from .state import EvalDiagnostic, MissionState, TruthValue, eval_condition

NULL_MASS_EPS = 1e-12
ENUMERATION_LIMIT = 20


class ExplainError(Exception):
    """Base for engine failures."""


class UnknownBehaviorError(ExplainError):
    def __init__(self, behavior_id: str, known: list[str]):
        super().__init__(
            f"unknown behavior '{behavior_id}'; known behaviors: {', '.join(known) or '(none)'}"
        )
        self.behavior_id = behavior_id
        self.known = known


class CannotExplainError(ExplainError):
    """All probability mass fell on null leaves: the model says the behavior
    would not fire, contradicting the operator's observation."""

    def __init__(self, behavior_id: str):
        super().__init__(f"model puts no probability on any reason for '{behavior_id}'")
        self.behavior_id = behavior_id


class EnumerationLimitError(ExplainError):
    def __init__(self, count: int):
        super().__init__(
            f"{count} unknown conditions exceed the enumeration limit of {ENUMERATION_LIMIT}"
        )
        self.count = count


@dataclass(frozen=True)
class ScoredReason:
    reason_id: str
    probability: float
    path_conditions: tuple[tuple[Condition, TruthValue], ...]


@dataclass(frozen=True)
class WhyResult:
    behavior_id: str
    reasons: tuple[ScoredReason, ...]
    dropped_null_mass: float


@dataclass(frozen=True)
class ScoredBlocker:
    behavior_id: str
    guard_index: int
    block_credence: float
    truth: TruthValue  # FALSE or UNKNOWN


@dataclass(frozen=True)
class AnswerPolicy:
    """Completeness/soundness trade-off for why answers.

    Complete reports every candidate reason; Sound keeps only reasons at or
    above the threshold and never renormalizes what is left — the displayed
    numbers stay honest posteriors.
    """

    mode: Literal["complete", "sound"] = "complete"
    threshold: float = 0.8


DEFAULT_POLICY = AnswerPolicy()


def _require_behavior(model: AutonomyModel, behavior_id: str) -> BehaviorSpec:
    b = model.behavior(behavior_id)
    if b is None:
        raise UnknownBehaviorError(behavior_id, model.behavior_ids())
    return b


@dataclass
class _LeafMass:
    reason_id: str
    template: TemplateText
    mass: float
    path: tuple[tuple[Condition, TruthValue], ...]


def _propagate(
    tree: TreeNode,
    state: MissionState,
    diagnostics: list[EvalDiagnostic] | None,
) -> tuple[list[_LeafMass], float]:
    """Mass per reason (pre-order, merged by reason id) plus total null mass."""
    rows: dict[str, _LeafMass] = {}
    null_mass = 0.0

    def walk(node: TreeNode, mass: float, path: tuple[tuple[Condition, TruthValue], ...]):
        nonlocal null_mass
        if isinstance(node, NullLeaf):
            null_mass += mass
            return
        if isinstance(node, ReasonLeaf):
            row = rows.get(node.reason_id)
            if row is None:
                rows[node.reason_id] = _LeafMass(node.reason_id, node.template, mass, path)
            else:
                row.mass += mass
            return
        truth = eval_condition(node.condition, state, diagnostics)
        if truth is TruthValue.TRUE:
            walk(node.true_child, mass, path + ((node.condition, truth),))
        elif truth is TruthValue.FALSE:
            walk(node.false_child, mass, path + ((node.condition, truth),))
        else:
            step = path + ((node.condition, truth),)
            walk(node.true_child, mass * node.prior_true, step)
            walk(node.false_child, mass * (1.0 - node.prior_true), step)

    walk(tree, 1.0, ())
    return list(rows.values()), null_mass


def _finish(behavior_id: str, rows: list[_LeafMass], null_mass: float) -> WhyResult:
    if null_mass >= 1.0 - NULL_MASS_EPS:
        raise CannotExplainError(behavior_id)
    scale = 1.0 / (1.0 - null_mass)
    reasons = [
        ScoredReason(
            reason_id=row.reason_id,
            probability=min(1.0, max(0.0, row.mass * scale)),
            path_conditions=row.path,
        )
        for row in rows
        if row.mass > 0.0
    ]
    # Stable sort: ties keep declaration (pre-order) order.
    reasons.sort(key=lambda r: -r.probability)
    return WhyResult(behavior_id=behavior_id, reasons=tuple(reasons), dropped_null_mass=null_mass)


def explain_why(
    model: AutonomyModel,
    state: MissionState,
    behavior_id: str,
    diagnostics: list[EvalDiagnostic] | None = None,
) -> WhyResult:
    """Score every candidate reason for a behavior the operator observed.

    Requires a model that passed validation (in particular: no duplicate
    conditions within the tree). Raises CannotExplainError when the model
    contradicts the observation outright.
    """
    b = _require_behavior(model, behavior_id)
    rows, null_mass = _propagate(b.tree, state, diagnostics)
    return _finish(behavior_id, rows, null_mass)


def reason_template(model: AutonomyModel, behavior_id: str, reason_id: str) -> TemplateText:
    """Template of the first (pre-order) leaf carrying `reason_id`."""
    b = _require_behavior(model, behavior_id)

    def find(node: TreeNode) -> TemplateText | None:
        if isinstance(node, ReasonLeaf):
            return node.template if node.reason_id == reason_id else None
        if isinstance(node, DecisionNode):
            return find(node.true_child) or find(node.false_child)
        return None

    template = find(b.tree)
    if template is None:
        raise ExplainError(f"behavior '{behavior_id}' has no reason '{reason_id}'")
    return template


def enumerate_explain(
    model: AutonomyModel,
    state: MissionState,
    behavior_id: str,
) -> WhyResult:
    """Brute-force oracle for explain_why.

    Enumerates all 2^k assignments of the k distinct Unknown conditions,
    weights each by the product of prior factors, and descends the tree
    deterministically under each assignment. Equals explain_why up to float
    noise because each condition occurs at most once per tree.
    """
    b = _require_behavior(model, behavior_id)

    truths: dict[Condition, TruthValue] = {}
    unknowns: list[tuple[Condition, float]] = []
    leaf_order: list[ReasonLeaf] = []

    def scan(node: TreeNode):
        if isinstance(node, ReasonLeaf):
            leaf_order.append(node)
            return
        if isinstance(node, DecisionNode):
            if node.condition not in truths:
                truth = eval_condition(node.condition, state)
                truths[node.condition] = truth
                if truth is TruthValue.UNKNOWN:
                    unknowns.append((node.condition, node.prior_true))
            scan(node.true_child)
            scan(node.false_child)

    scan(b.tree)
    if len(unknowns) > ENUMERATION_LIMIT:
        raise EnumerationLimitError(len(unknowns))

    masses: dict[str, float] = {}
    for leaf in leaf_order:
        masses.setdefault(leaf.reason_id, 0.0)
    null_mass = 0.0

    for bits in range(1 << len(unknowns)):
        weight = 1.0
        assigned: dict[Condition, bool] = {}
        for j, (cond, prior) in enumerate(unknowns):
            if bits & (1 << j):
                assigned[cond] = True
                weight *= prior
            else:
                assigned[cond] = False
                weight *= 1.0 - prior

        node = b.tree
        while isinstance(node, DecisionNode):
            truth = truths[node.condition]
            if truth is TruthValue.UNKNOWN:
                branch = assigned[node.condition]
            else:
                branch = truth is TruthValue.TRUE
            node = node.true_child if branch else node.false_child
        if isinstance(node, NullLeaf):
            null_mass += weight
        else:
            masses[node.reason_id] += weight

    # Reuse the propagation pass purely for audit paths, keeping the masses
    # computed here.
    paths: dict[str, tuple[tuple[Condition, TruthValue], ...]] = {}
    for leaf in leaf_order:
        if leaf.reason_id not in paths:
            paths[leaf.reason_id] = _leaf_path(b.tree, leaf, truths)

    rows = [
        _LeafMass(leaf.reason_id, leaf.template, masses[leaf.reason_id], paths[leaf.reason_id])
        for leaf in _first_occurrences(leaf_order)
    ]
    return _finish(behavior_id, rows, null_mass)


def _first_occurrences(leaves: list[ReasonLeaf]) -> list[ReasonLeaf]:
    seen: set[str] = set()
    out: list[ReasonLeaf] = []
    for leaf in leaves:
        if leaf.reason_id not in seen:
            seen.add(leaf.reason_id)
            out.append(leaf)
    return out


def _leaf_path(
    tree: TreeNode, target: ReasonLeaf, truths: dict[Condition, TruthValue]
) -> tuple[tuple[Condition, TruthValue], ...]:
    def search(node: TreeNode, acc):
        if node is target:
            return acc
        if isinstance(node, DecisionNode):
            step = acc + ((node.condition, truths[node.condition]),)
            return search(node.true_child, step) or search(node.false_child, step)
        return None

    return search(tree, ()) or ()


def explain_why_not(
    model: AutonomyModel,
    state: MissionState,
    behavior_id: str,
    diagnostics: list[EvalDiagnostic] | None = None,
) -> tuple[ScoredBlocker, ...]:
    """Guards currently preventing a behavior, most credible blocker first.

    A guard evaluating False blocks with credence 1; an Unknown guard blocks
    with credence 1 - prior_true. Satisfied guards are excluded, so an empty
    result means no known constraint prevents the behavior.
    """
    b = _require_behavior(model, behavior_id)
    blockers: list[ScoredBlocker] = []
    for i, guard in enumerate(b.guards):
        truth = eval_condition(guard.condition, state, diagnostics)
        if truth is TruthValue.FALSE:
            blockers.append(ScoredBlocker(behavior_id, i, 1.0, truth))
        elif truth is TruthValue.UNKNOWN:
            blockers.append(ScoredBlocker(behavior_id, i, 1.0 - guard.prior_true, truth))
    blockers.sort(key=lambda blk: -blk.block_credence)  # stable: ties keep guard order
    return tuple(blockers)


def apply_answer_policy(result: WhyResult, policy: AnswerPolicy) -> WhyResult:
    """Filter a why result per the policy; Sound may leave it empty.

    Probabilities are never renormalized after filtering: an empty Sound
    result is a confidence refusal, not a contradiction.
    """
    if policy.mode == "complete":
        return result
    kept = tuple(r for r in result.reasons if r.probability >= policy.threshold)
    return replace(result, reasons=kept)
