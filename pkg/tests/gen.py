"""Seeded random generators for models and states, shared by property and
acceptance tests. Everything is driven by an explicit random.Random so runs
are reproducible."""

from __future__ import annotations

import random

from axv_explain.model.nodes import (
    And,
    AutonomyModel,
    BehaviorSpec,
    BoolLit,
    Compare,
    Condition,
    DecisionNode,
    DurationLit,
    ElapsedSince,
    GuardConstraint,
    InZone,
    Not,
    NullLeaf,
    NumberLit,
    Or,
    PhaseIs,
    ReasonLeaf,
    TemplateText,
    TextLit,
    TreeNode,
    Var,
    iter_conditions,
    reason_leaves,
)
from axv_explain.state import MissionEvent, MissionState, ingest_event, new_state

VAR_POOL = [f"v{i}" for i in range(10)]
KIND_POOL = ["ping", "fix", "checkin"]
ZONE_POOL = ["alpha", "bravo"]
PHASE_POOL = ["transit", "survey"]

ORDER_OPS = ("<", "<=", ">", ">=")
ALL_OPS = ("<", "<=", ">", ">=", "==", "!=")


def _fresh_condition(rng: random.Random, used: set[Condition], rich: bool) -> Condition:
    for _ in range(200):
        roll = rng.random()
        if not rich or roll < 0.65:
            cand: Condition = Compare(
                Var(rng.choice(VAR_POOL)),
                rng.choice(ALL_OPS),
                NumberLit(round(rng.uniform(0.0, 100.0), 1)),
            )
        elif roll < 0.75:
            cand = Compare(
                ElapsedSince(rng.choice(KIND_POOL)),
                rng.choice(ORDER_OPS),
                DurationLit(float(rng.randrange(10, 2000))),
            )
        elif roll < 0.83:
            cand = InZone(rng.choice(ZONE_POOL))
        elif roll < 0.89:
            cand = PhaseIs(rng.choice(PHASE_POOL))
        elif roll < 0.95:
            cand = Not(
                Compare(
                    Var(rng.choice(VAR_POOL)),
                    rng.choice(ORDER_OPS),
                    NumberLit(float(rng.randrange(0, 100))),
                )
            )
        else:
            cand = And(
                Compare(Var(rng.choice(VAR_POOL)), "<", NumberLit(float(rng.randrange(0, 100)))),
                Not(InZone(rng.choice(ZONE_POOL))),
            )
        if cand not in used:
            used.add(cand)
            return cand
    raise RuntimeError("could not generate a fresh condition")


def gen_tree(
    rng: random.Random,
    max_depth: int = 6,
    max_conditions: int = 12,
    rich: bool = True,
    null_p: float = 0.2,
    condition_factory=None,
) -> TreeNode:
    """Random decision tree with structurally distinct conditions and at
    least one reason leaf."""
    factory = condition_factory or _fresh_condition
    while True:
        used: set[Condition] = set()
        counters = {"reason": 0, "cond": 0}

        def build(depth: int) -> TreeNode:
            at_limit = depth >= max_depth or counters["cond"] >= max_conditions
            if at_limit or (depth > 0 and rng.random() < 0.3):
                if rng.random() < null_p:
                    return NullLeaf()
                counters["reason"] += 1
                rid = f"r{counters['reason']}"
                return ReasonLeaf(rid, TemplateText(f"cause {rid} holds"))
            counters["cond"] += 1
            cond = factory(rng, used, rich)
            prior = round(rng.uniform(0.05, 0.95), 3)
            return DecisionNode(cond, prior, build(depth + 1), build(depth + 1))

        tree = build(0)
        if reason_leaves(tree):
            return tree


def gen_tree_model(rng: random.Random, **tree_kwargs) -> AutonomyModel:
    """Single-behavior model around a random tree (engine-level testing)."""
    tree = gen_tree(rng, **tree_kwargs)
    behavior = BehaviorSpec(id="b", aliases=("b",), guards=(), tree=tree)
    return AutonomyModel((behavior,))


def _operands(cond: Condition):
    if isinstance(cond, Compare):
        yield cond.left
        yield cond.right
    elif isinstance(cond, (And,)):
        yield from _operands(cond.left)
        yield from _operands(cond.right)
    elif isinstance(cond, Not):
        yield from _operands(cond.operand)


def gen_eval_state(rng: random.Random, model: AutonomyModel, assign_p: float = 0.55) -> MissionState:
    """Random mission state giving each tree variable a value with
    probability `assign_p`, with random zone/phase/event history."""
    variables: set[str] = set()
    kinds: set[str] = set()
    zones: set[str] = set()
    phases = False
    for b in model.behaviors:
        for cond in list(iter_conditions(b.tree)) + [g.condition for g in b.guards]:
            for op in _operands(cond):
                if isinstance(op, Var):
                    variables.add(op.name)
                elif isinstance(op, ElapsedSince):
                    kinds.add(op.event_kind)
            if isinstance(cond, InZone):
                zones.add(cond.zone)
            if isinstance(cond, PhaseIs):
                phases = True

    records: list[tuple[float, str, dict]] = []
    for kind in sorted(kinds):
        if rng.random() < 0.6:
            records.append((rng.uniform(1.0, 900.0), kind, {}))
    for zone in sorted(zones):
        if rng.random() < 0.5:
            records.append((rng.uniform(1.0, 900.0), "zone_entered", {"zone": zone}))
    if phases and rng.random() < 0.6:
        records.append((rng.uniform(1.0, 900.0), "phase_change", {"phase": rng.choice(PHASE_POOL)}))
    payload = {
        name: round(rng.uniform(0.0, 100.0), 2)
        for name in sorted(variables)
        if rng.random() < assign_p
    }
    records.sort(key=lambda r: r[0])

    state = new_state(0.0)
    for t, kind, data in records:
        state = ingest_event(state, MissionEvent(t=t, kind=kind, payload=data))
    return ingest_event(state, MissionEvent(t=1000.0, kind="telemetry", payload=payload))


# --- Bayesian-refinement cases ------------------------------------------------

_SATISFYING = {
    "<": lambda x: x - 1.0,
    "<=": lambda x: x,
    ">": lambda x: x + 1.0,
    ">=": lambda x: x,
    "==": lambda x: x,
    "!=": lambda x: x + 1.0,
}


def fresh_var_condition(rng: random.Random, used: set[Condition], rich: bool) -> Condition:
    """Plain comparison against a variable no other condition uses, so
    resolving it touches exactly one condition."""
    del rich
    i = len(used)
    cond = Compare(Var(f"u{i}"), rng.choice(ALL_OPS), NumberLit(float(rng.randrange(10, 90))))
    used.add(cond)
    return cond


def satisfying_value(cond: Compare) -> float:
    assert isinstance(cond.right, NumberLit)
    return _SATISFYING[cond.op](cond.right.value)


def leaf_regions(tree: TreeNode, cond: Condition) -> dict[str, str]:
    """Where each reason leaf sits relative to the node carrying `cond`:
    'true' / 'false' subtree, or 'outside'."""
    regions: dict[str, str] = {}

    def walk(node: TreeNode, region: str):
        if isinstance(node, ReasonLeaf):
            regions[node.reason_id] = region
        elif isinstance(node, DecisionNode):
            if node.condition == cond:
                walk(node.true_child, "true")
                walk(node.false_child, "false")
            else:
                walk(node.true_child, region)
                walk(node.false_child, region)

    walk(tree, "outside")
    return regions


# --- DSL-level model generation ------------------------------------------------

_TEMPLATE_DECOR = [
    "a \"quoted\" value",
    "tab\there",
    "line\nbreak",
    "back\\slash",
    "plain words only",
]


def _gen_template(rng: random.Random, variables: list[str], kinds: list[str]) -> TemplateText:
    roll = rng.random()
    if variables and roll < 0.4:
        var = rng.choice(variables)
        return TemplateText(f"value of {var} is {{{var}}} now")
    if kinds and roll < 0.55:
        kind = rng.choice(kinds)
        return TemplateText(f"last {kind} was {{elapsed_since({kind})}} ago")
    return TemplateText(rng.choice(_TEMPLATE_DECOR))


def _rich_dsl_condition(rng: random.Random, used: set[Condition], rich: bool) -> Condition:
    # Widen the engine pool with text/bool comparisons the DSL also allows.
    roll = rng.random()
    for _ in range(200):
        if roll < 0.15:
            cand: Condition = Compare(Var(rng.choice(VAR_POOL)), rng.choice(("==", "!=")), TextLit(rng.choice(["ready", "armed"])))
        elif roll < 0.25:
            cand = Compare(Var(rng.choice(VAR_POOL)), "==", BoolLit(rng.random() < 0.5))
        elif roll < 0.35:
            cand = Or(
                InZone(rng.choice(ZONE_POOL)),
                Compare(Var(rng.choice(VAR_POOL)), ">", NumberLit(float(rng.randrange(0, 50)))),
            )
        else:
            return _fresh_condition(rng, used, rich)
        if cand not in used:
            used.add(cand)
            return cand
        roll = rng.random()
    raise RuntimeError("could not generate a fresh condition")


def gen_dsl_model(rng: random.Random) -> AutonomyModel:
    """Random multi-behavior model exercising the whole grammar; valid by
    construction (distinct conditions, in-range priors, known template
    variables), so the validator must stay silent on it."""
    behaviors = []
    alias_counter = 0
    for b_index in range(rng.randint(1, 3)):
        tree = gen_tree(rng, max_depth=4, max_conditions=6, condition_factory=_rich_dsl_condition)
        guards = []
        guard_used: set[Condition] = set()
        for _ in range(rng.randint(0, 2)):
            cond = _rich_dsl_condition(rng, guard_used, True)
            prior = 0.5 if rng.random() < 0.5 else round(rng.uniform(0.05, 0.95), 3)
            guards.append(GuardConstraint(cond, TemplateText("guard blocks it"), prior))

        variables = sorted(
            {
                op.name
                for cond in list(iter_conditions(tree)) + [g.condition for g in guards]
                for op in _operands(cond)
                if isinstance(op, Var)
            }
        )
        kinds = sorted(
            {
                op.event_kind
                for cond in list(iter_conditions(tree)) + [g.condition for g in guards]
                for op in _operands(cond)
                if isinstance(op, ElapsedSince)
            }
        )
        tree = _retemplate(rng, tree, variables, kinds)
        guards = [
            GuardConstraint(g.condition, _gen_template(rng, variables, kinds), g.prior_true)
            for g in guards
        ]

        aliases = []
        for _ in range(rng.randint(1, 3)):
            alias_counter += 1
            aliases.append(rng.choice(["doing task", "running job", "the maneuver"]) + f" {alias_counter}")
        behaviors.append(
            BehaviorSpec(
                id=f"b{b_index}",
                aliases=tuple(aliases),
                guards=tuple(guards),
                tree=tree,
            )
        )
    return AutonomyModel(tuple(behaviors))


def _retemplate(rng: random.Random, node: TreeNode, variables: list[str], kinds: list[str]) -> TreeNode:
    if isinstance(node, ReasonLeaf):
        return ReasonLeaf(node.reason_id, _gen_template(rng, variables, kinds))
    if isinstance(node, DecisionNode):
        return DecisionNode(
            node.condition,
            node.prior_true,
            _retemplate(rng, node.true_child, variables, kinds),
            _retemplate(rng, node.false_child, variables, kinds),
        )
    return node
