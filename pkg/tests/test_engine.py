from __future__ import annotations

import random

import pytest

from axv_explain.engine import (
    AnswerPolicy,
    CannotExplainError,
    EnumerationLimitError,
    UnknownBehaviorError,
    apply_answer_policy,
    enumerate_explain,
    explain_why,
    explain_why_not,
    reason_template,
)
from axv_explain.model import (
    AutonomyModel,
    BehaviorSpec,
    Compare,
    DecisionNode,
    GuardConstraint,
    NullLeaf,
    NumberLit,
    ReasonLeaf,
    TemplateText,
    Var,
    parse_condition,
)
from axv_explain.state import MissionEvent, TruthValue, ingest_event, new_state

from .gen import (
    fresh_var_condition,
    gen_eval_state,
    gen_tree_model,
    leaf_regions,
    satisfying_value,
)

APPROX = 1e-9


def _leaf(rid, text="x"):
    return ReasonLeaf(rid, TemplateText(text))


def _model(tree, guards=()):
    return AutonomyModel((BehaviorSpec("b", ("b",), tuple(guards), tree),))


def _probs(result):
    return [(r.reason_id, r.probability) for r in result.reasons]


class TestExplainWhy:
    def test_demo_scenario_early(self, demo, demo_state_at):
        result = explain_why(demo, demo_state_at(500.0), "surface")
        assert [r.reason_id for r in result.reasons] == ["mission_complete", "low_battery"]
        assert result.reasons[0].probability == pytest.approx(0.7, abs=APPROX)
        assert result.reasons[1].probability == pytest.approx(0.3, abs=APPROX)
        assert result.dropped_null_mass == 0.0

    def test_demo_scenario_late_single_confident_reason(self, demo, demo_state_at):
        result = explain_why(demo, demo_state_at(1400.0), "surface")
        assert _probs(result) == [("gps_fix_needed", 1.0)]

    def test_single_reason_leaf(self):
        result = explain_why(_model(_leaf("only")), new_state(0.0), "b")
        assert _probs(result) == [("only", 1.0)]

    def test_unknown_behavior(self, demo):
        with pytest.raises(UnknownBehaviorError) as exc:
            explain_why(demo, new_state(0.0), "dive")
        assert "surface" in str(exc.value) and "gps_fix" in str(exc.value)

    def test_cannot_explain_when_all_mass_is_null(self):
        # Condition resolves True and the true branch is null.
        tree = DecisionNode(parse_condition("v < 5"), 0.5, NullLeaf(), _leaf("r"))
        state = ingest_event(new_state(0.0), MissionEvent(1.0, "telemetry", {"v": 3}))
        with pytest.raises(CannotExplainError):
            explain_why(_model(tree), state, "b")

    def test_null_mass_renormalization(self):
        tree = DecisionNode(parse_condition("v < 5"), 0.4, NullLeaf(), _leaf("r"))
        result = explain_why(_model(tree), new_state(0.0), "b")
        assert result.dropped_null_mass == pytest.approx(0.4, abs=APPROX)
        assert _probs(result) == [("r", pytest.approx(1.0, abs=APPROX))]

    def test_partial_null_mass(self):
        # root unknown p=0.5: T -> a; F -> (w < 3, p=0.4): T -> b, F -> null.
        tree = DecisionNode(
            parse_condition("v < 5"),
            0.5,
            _leaf("a"),
            DecisionNode(parse_condition("w < 3"), 0.4, _leaf("b"), NullLeaf()),
        )
        result = explain_why(_model(tree), new_state(0.0), "b")
        assert result.dropped_null_mass == pytest.approx(0.3, abs=APPROX)
        probs = dict(_probs(result))
        assert probs["a"] == pytest.approx(5 / 7, abs=APPROX)
        assert probs["b"] == pytest.approx(2 / 7, abs=APPROX)

    def test_duplicate_reason_ids_merge(self):
        tree = DecisionNode(parse_condition("v < 5"), 0.5, _leaf("same", "t1"), _leaf("same", "t2"))
        result = explain_why(_model(tree), new_state(0.0), "b")
        assert _probs(result) == [("same", pytest.approx(1.0, abs=APPROX))]
        # Template lookup resolves to the first leaf in declaration order.
        assert reason_template(_model(tree), "b", "same").text == "t1"

    def test_path_conditions_audit_trail(self, demo, demo_state_at):
        result = explain_why(demo, demo_state_at(500.0), "surface")
        by_id = {r.reason_id: r for r in result.reasons}
        battery = Compare(Var("battery_pct"), "<", NumberLit(20.0))
        assert by_id["low_battery"].path_conditions == ((battery, TruthValue.UNKNOWN),)
        assert [t for _, t in by_id["mission_complete"].path_conditions] == [
            TruthValue.UNKNOWN,
            TruthValue.FALSE,
        ]

    def test_deterministic(self, demo, demo_state_at):
        state = demo_state_at(500.0)
        assert explain_why(demo, state, "surface") == explain_why(demo, state, "surface")

    def test_ties_broken_by_declaration_order(self):
        tree = DecisionNode(parse_condition("v < 5"), 0.5, _leaf("first"), _leaf("second"))
        result = explain_why(_model(tree), new_state(0.0), "b")
        assert [r.reason_id for r in result.reasons] == ["first", "second"]


class TestEnumerateExplain:
    def test_no_unknowns_identical_to_explain_why(self):
        tree = DecisionNode(parse_condition("v < 5"), 0.5, _leaf("a"), _leaf("c"))
        state = ingest_event(new_state(0.0), MissionEvent(1.0, "telemetry", {"v": 3}))
        model = _model(tree)
        assert enumerate_explain(model, state, "b") == explain_why(model, state, "b")

    def test_demo_scenario_early(self, demo, demo_state_at):
        result = enumerate_explain(demo, demo_state_at(500.0), "surface")
        probs = dict(_probs(result))
        assert probs["mission_complete"] == pytest.approx(0.7, abs=APPROX)
        assert probs["low_battery"] == pytest.approx(0.3, abs=APPROX)

    def test_limit_refusal(self):
        # 21 unknown conditions down one spine.
        node = _leaf("end")
        for i in range(21):
            node = DecisionNode(parse_condition(f"u{i} < 5"), 0.5, _leaf(f"r{i}"), node)
        with pytest.raises(EnumerationLimitError):
            enumerate_explain(_model(node), new_state(0.0), "b")

    def test_matches_explain_why_on_random_cases(self):
        rng = random.Random(11211)
        checked = 0
        for _ in range(200):
            model = gen_tree_model(rng)
            state = gen_eval_state(rng, model)
            try:
                fast = explain_why(model, state, "b")
            except CannotExplainError:
                with pytest.raises(CannotExplainError):
                    enumerate_explain(model, state, "b")
                continue
            slow = enumerate_explain(model, state, "b")
            fast_probs = dict(_probs(fast))
            slow_probs = dict(_probs(slow))
            assert fast_probs.keys() == slow_probs.keys()
            for rid, p in fast_probs.items():
                assert p == pytest.approx(slow_probs[rid], abs=APPROX)
            assert sum(fast_probs.values()) == pytest.approx(1.0, abs=APPROX)
            assert [r.reason_id for r in fast.reasons] == [r.reason_id for r in slow.reasons]
            checked += 1
        assert checked > 100  # most random cases must be explainable


class TestBayesianRefinement:
    def test_constructed_case(self):
        # root: va < 10 [0.3] -> a | (vb < 5 [0.6] -> b | c), both unknown.
        tree = DecisionNode(
            parse_condition("va < 10"),
            0.3,
            _leaf("a"),
            DecisionNode(parse_condition("vb < 5"), 0.6, _leaf("b"), _leaf("c")),
        )
        model = _model(tree)
        base = explain_why(model, new_state(0.0), "b")
        masses = {r.reason_id: r.probability * (1 - base.dropped_null_mass) for r in base.reasons}
        assert masses["a"] == pytest.approx(0.3, abs=APPROX)
        assert masses["b"] == pytest.approx(0.42, abs=APPROX)
        assert masses["c"] == pytest.approx(0.28, abs=APPROX)

        # Resolve vb < 5 to True: conditional distribution divides by 0.6.
        state = ingest_event(new_state(0.0), MissionEvent(1.0, "telemetry", {"vb": 4}))
        refined = explain_why(model, state, "b")
        refined_masses = {
            r.reason_id: r.probability * (1 - refined.dropped_null_mass) for r in refined.reasons
        }
        assert refined_masses["a"] == pytest.approx(0.3, abs=APPROX)
        assert refined_masses["b"] == pytest.approx(0.42 / 0.6, abs=APPROX)
        assert "c" not in refined_masses

    def test_randomized_cases(self):
        rng = random.Random(977001)
        run_bayesian_refinement_cases(rng, 60)


def run_bayesian_refinement_cases(rng: random.Random, count: int, tol: float = APPROX):
    """Shared driver, also used by the acceptance suite."""
    done = 0
    while done < count:
        model = gen_tree_model(
            rng, max_depth=5, max_conditions=10, condition_factory=fresh_var_condition
        )
        state = gen_eval_state(rng, model, assign_p=0.4)
        tree = model.behaviors[0].tree
        unknown = []
        prior_of = {}

        from axv_explain.model import DecisionNode as DN
        from axv_explain.model import walk_tree
        from axv_explain.state import eval_condition

        for node, _ in walk_tree(tree):
            if isinstance(node, DN):
                prior_of[node.condition] = node.prior_true
                if eval_condition(node.condition, state) is TruthValue.UNKNOWN:
                    unknown.append(node.condition)
        if not unknown:
            continue
        try:
            base = explain_why(model, state, "b")
        except CannotExplainError:
            continue

        cond = rng.choice(unknown)
        prior = prior_of[cond]
        regions = leaf_regions(tree, cond)
        base_mass = {r.reason_id: r.probability * (1 - base.dropped_null_mass) for r in base.reasons}
        expected = {}
        for rid, mass in base_mass.items():
            region = regions[rid]
            if region == "true":
                expected[rid] = mass / prior
            elif region == "false":
                expected[rid] = 0.0
            else:
                expected[rid] = mass

        value = satisfying_value(cond)
        resolved = ingest_event(
            state, MissionEvent(state.clock + 1.0, "telemetry", {cond.left.name: value})
        )
        try:
            refined = explain_why(model, resolved, "b")
            refined_mass = {
                r.reason_id: r.probability * (1 - refined.dropped_null_mass)
                for r in refined.reasons
            }
        except CannotExplainError:
            refined_mass = {}
            assert all(v <= tol for v in expected.values())
        for rid in set(expected) | set(refined_mass):
            assert abs(expected.get(rid, 0.0) - refined_mass.get(rid, 0.0)) <= tol, (
                rid,
                expected.get(rid),
                refined_mass.get(rid),
            )
        done += 1


class TestExplainWhyNot:
    def test_demo_both_guards_false(self, demo):
        state = new_state(0.0)
        state = ingest_event(state, MissionEvent(1.0, "zone_entered", {"zone": "no_surface"}))
        state = ingest_event(state, MissionEvent(2.0, "telemetry", {"depth": 40}))
        blockers = explain_why_not(demo, state, "gps_fix")
        assert [(b.guard_index, b.block_credence, b.truth) for b in blockers] == [
            (0, 1.0, TruthValue.FALSE),
            (1, 1.0, TruthValue.FALSE),
        ]

    def test_demo_unknown_guard_uses_prior(self, demo):
        # Not in the zone, depth unknown: only the depth guard blocks, at 0.5.
        blockers = explain_why_not(demo, new_state(0.0), "gps_fix")
        assert [(b.guard_index, b.block_credence, b.truth) for b in blockers] == [
            (1, 0.5, TruthValue.UNKNOWN)
        ]

    def test_no_guards_means_empty(self):
        blockers = explain_why_not(_model(_leaf("r")), new_state(0.0), "b")
        assert blockers == ()

    def test_satisfied_guards_excluded(self, demo, demo_state_at):
        # At t=1000 the demo vehicle is surfaced (depth 0) but inside the zone.
        blockers = explain_why_not(demo, demo_state_at(1000.0), "gps_fix")
        assert [(b.guard_index, b.block_credence) for b in blockers] == [(0, 1.0)]

    def test_sorted_by_credence_then_guard_order(self):
        guards = (
            GuardConstraint(parse_condition("a < 1"), TemplateText("g0"), prior_true=0.9),
            GuardConstraint(parse_condition("b < 1"), TemplateText("g1"), prior_true=0.2),
            GuardConstraint(parse_condition("c < 1"), TemplateText("g2"), prior_true=0.2),
        )
        blockers = explain_why_not(_model(_leaf("r"), guards), new_state(0.0), "b")
        # credences: 0.1, 0.8, 0.8 -> order: g1, g2 (tie by index), g0
        assert [b.guard_index for b in blockers] == [1, 2, 0]

    def test_unknown_behavior(self, demo):
        with pytest.raises(UnknownBehaviorError):
            explain_why_not(demo, new_state(0.0), "nope")


class TestAnswerPolicy:
    def test_complete_is_identity(self, demo, demo_state_at):
        result = explain_why(demo, demo_state_at(500.0), "surface")
        assert apply_answer_policy(result, AnswerPolicy("complete")) == result

    def test_sound_filters_everything_below_threshold(self, demo, demo_state_at):
        result = explain_why(demo, demo_state_at(500.0), "surface")
        filtered = apply_answer_policy(result, AnswerPolicy("sound", 0.8))
        assert filtered.reasons == ()
        assert filtered.dropped_null_mass == result.dropped_null_mass

    def test_sound_keeps_certain_reason(self, demo, demo_state_at):
        result = explain_why(demo, demo_state_at(1400.0), "surface")
        filtered = apply_answer_policy(result, AnswerPolicy("sound", 0.8))
        assert _probs(filtered) == [("gps_fix_needed", 1.0)]

    def test_threshold_is_inclusive_and_never_renormalizes(self):
        tree = DecisionNode(parse_condition("v < 5"), 0.8, _leaf("a"), _leaf("c"))
        result = explain_why(_model(tree), new_state(0.0), "b")
        filtered = apply_answer_policy(result, AnswerPolicy("sound", 0.8))
        assert _probs(filtered) == [("a", pytest.approx(0.8))]
