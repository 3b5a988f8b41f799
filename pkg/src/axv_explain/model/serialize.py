"""Canonical DSL writer: parse(serialize(m)) is structurally equal to m.

Canonical form uses two-space indentation, one alias statement per behavior,
seconds for durations, and omits `[prior 0.5]` annotations (the default).
"""

from __future__ import annotations

from .nodes import (
    DEFAULT_PRIOR,
    And,
    AutonomyModel,
    BehaviorSpec,
    BoolLit,
    Compare,
    Condition,
    DecisionNode,
    DurationLit,
    ElapsedSince,
    InZone,
    Not,
    NullLeaf,
    NumberLit,
    Operand,
    Or,
    PhaseIs,
    ReasonLeaf,
    TextLit,
    TreeNode,
    Var,
)


def format_number(value: float) -> str:
    """Shortest decimal form that parses back to the same float.

    The DSL lexer has no exponent syntax, so very large or small magnitudes
    fall back to plain positional notation.
    """
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    s = repr(value)
    if "e" in s or "E" in s:
        s = format(value, ".17f").rstrip("0").rstrip(".")
    return s


def quote_string(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def _prec(c: Condition) -> int:
    if isinstance(c, Or):
        return 1
    if isinstance(c, And):
        return 2
    return 3


def _operand(op: Operand) -> str:
    if isinstance(op, Var):
        return op.name
    if isinstance(op, NumberLit):
        return format_number(op.value)
    if isinstance(op, DurationLit):
        return f"{format_number(op.seconds)}s"
    if isinstance(op, TextLit):
        return quote_string(op.value)
    if isinstance(op, BoolLit):
        return "true" if op.value else "false"
    if isinstance(op, ElapsedSince):
        return f"elapsed_since({op.event_kind})"
    raise TypeError(f"not an operand: {op!r}")


def _child(c: Condition, parent_prec: int, right_side: bool) -> str:
    s = serialize_condition(c)
    p = _prec(c)
    # Parenthesize right-nested same-precedence children so the left-associative
    # parser rebuilds the identical shape.
    if p < parent_prec or (p == parent_prec and right_side):
        return f"({s})"
    return s


def serialize_condition(c: Condition) -> str:
    if isinstance(c, Or):
        return f"{_child(c.left, 1, False)} or {_child(c.right, 1, True)}"
    if isinstance(c, And):
        return f"{_child(c.left, 2, False)} and {_child(c.right, 2, True)}"
    if isinstance(c, Not):
        inner = serialize_condition(c.operand)
        if isinstance(c.operand, (And, Or)):
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(c, Compare):
        return f"{_operand(c.left)} {c.op} {_operand(c.right)}"
    if isinstance(c, InZone):
        return f"in_zone({quote_string(c.zone)})"
    if isinstance(c, PhaseIs):
        return f"phase == {quote_string(c.phase)}"
    raise TypeError(f"not a condition: {c!r}")


def _prior_suffix(prior: float) -> str:
    if prior == DEFAULT_PRIOR:
        return ""
    return f" [prior {format_number(prior)}]"


def _node_lines(node: TreeNode, indent: str) -> list[str]:
    if isinstance(node, ReasonLeaf):
        return [f"{indent}reason {node.reason_id} {quote_string(node.template.text)}"]
    if isinstance(node, NullLeaf):
        return [f"{indent}null"]
    if isinstance(node, DecisionNode):
        lines = [f"{indent}if {serialize_condition(node.condition)}{_prior_suffix(node.prior_true)} {{"]
        lines.extend(_node_lines(node.true_child, indent + "  "))
        lines.append(f"{indent}}} else {{")
        lines.extend(_node_lines(node.false_child, indent + "  "))
        lines.append(f"{indent}}}")
        return lines
    raise TypeError(f"not a tree node: {node!r}")


def _behavior_lines(b: BehaviorSpec) -> list[str]:
    lines = [f"behavior {b.id} {{"]
    if b.aliases:
        lines.append("  alias " + ", ".join(quote_string(a) for a in b.aliases))
    for g in b.guards:
        lines.append(
            f"  guard {serialize_condition(g.condition)}{_prior_suffix(g.prior_true)}"
            f" explain {quote_string(g.explain_template.text)}"
        )
    lines.append("  tree {")
    lines.extend(_node_lines(b.tree, "    "))
    lines.append("  }")
    lines.append("}")
    return lines


def serialize_model(model: AutonomyModel) -> str:
    lines: list[str] = []
    for b in model.behaviors:
        lines.extend(_behavior_lines(b))
    return "\n".join(lines) + ("\n" if lines else "")
