"""Autonomy model DSL: AST types, parser, validator, canonical serializer."""

from .grammar import (
    DuplicateAliasError,
    DuplicateBehaviorError,
    ModelSyntaxError,
    parse_condition,
    parse_model,
)
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
    GuardConstraint,
    InZone,
    Not,
    NullLeaf,
    NumberLit,
    Operand,
    Or,
    PhaseIs,
    ReasonLeaf,
    TemplateText,
    TextLit,
    TreeNode,
    Var,
    iter_conditions,
    reason_leaves,
    template_slot_error,
    walk_tree,
)
from .serialize import format_number, serialize_condition, serialize_model
from .validate import ERROR, WARNING, Diagnostic, has_errors, validate_model

__all__ = [
    "DEFAULT_PRIOR",
    "ERROR",
    "WARNING",
    "And",
    "AutonomyModel",
    "BehaviorSpec",
    "BoolLit",
    "Compare",
    "Condition",
    "DecisionNode",
    "Diagnostic",
    "DuplicateAliasError",
    "DuplicateBehaviorError",
    "DurationLit",
    "ElapsedSince",
    "GuardConstraint",
    "InZone",
    "ModelSyntaxError",
    "Not",
    "NullLeaf",
    "NumberLit",
    "Operand",
    "Or",
    "PhaseIs",
    "ReasonLeaf",
    "TemplateText",
    "TextLit",
    "TreeNode",
    "Var",
    "format_number",
    "has_errors",
    "iter_conditions",
    "parse_condition",
    "parse_model",
    "reason_leaves",
    "serialize_condition",
    "serialize_model",
    "template_slot_error",
    "validate_model",
    "walk_tree",
]
