"""Symbolic translation: region stack, lazy rules, refresh/merge, verdicts."""

import random

import pytest

from oracles import placement_oracle, region_graph_reach, untimed_pda
from test_tpda import blocked_after_reset, push_test_pop, tiny
from tpreach.pushdown import (Pop, Push, Reachable, Rewrite,
                              SearchBudgetExceeded, Unreachable,
                              reachable_states, saturate, witness_replay)
from tpreach.randmodels import ModelSpace, random_tpda
from tpreach.regions import (OMEGA, Region, clock_item, ref_item,
                             render_region, reset_insert, sym_item)
from tpreach.tpda import (PopOp, PushOp, ResetOp, TestOp, TpdaRule, closed,
                          grid_oracle, unbounded)
from tpreach.translate import (MidPopTop, Plain, SymbolicTranslation,
                               TranslationError, analyze, check_reachability,
                               initial_region, merge, push_regions, refresh,
                               reachable_tpda_states)

R = ref_item()
X = clock_item("x")


def guarded(rules, clocks=("x",)):
    """A model whose clocks all matter: each gets one non-trivial test.

    Clocks that are never compared against a real bound are dropped
    before translation, so structural tests that want to see them in the
    regions must anchor each clock with a guard somewhere.
    """
    anchors = [TpdaRule("s4", TestOp(c, closed(0, 2)), "s4") for c in clocks]
    return tiny(list(rules) + anchors, clocks=clocks)


def test_initial_region():
    t2 = tiny([], clocks=("x", "y"))
    assert render_region(initial_region(t2)) == "{R:0, x:0, y:0}"
    assert render_region(initial_region(tiny([], clocks=()))) == "{R:0}"
    assert render_region(initial_region(tiny([]))) == "{R:0, x:0}"


def test_push_regions_golden():
    top = Region.make([[(R, 0), (X, 0)]], 2)
    out = push_regions(top, "a", closed(1, 1))
    assert [render_region(r) for r in out] == ["{R:0, R.:0, x:0, x.:0, a:1}"]


def test_push_regions_shadow_symbol_only_on_stack_tops():
    bottom = Region.make([[(R, 0), (X, 0)]], 2)
    (stack_top,) = push_regions(bottom, "a", closed(0, 0))
    assert not any(it.kind == "sym" and it.shadow for it in stack_top.items())
    (deeper,) = push_regions(stack_top, "b", closed(0, 0))
    shadow_syms = [it for it in deeper.items() if it.kind == "sym" and it.shadow]
    assert [it.name for it in shadow_syms] == ["a"]


def test_push_regions_wide_interval_many_placements():
    top = Region.make([[(R, 0), (X, 0)]], 3)
    out = push_regions(top, "a", Interval := closed(1, 3))
    assert len(out) == len(set(out)) and len(out) > 1
    for r in out:
        from tpreach.regions import satisfies
        assert satisfies(r, sym_item("a"), Interval)


def test_timed_rule_single_rotation():
    t = guarded([], clocks=("x", "y"))
    st = SymbolicTranslation(t)
    r0 = st.r0
    rules = st.pda().rules_for(Plain("s1"), r0)
    timed = [r for r in rules if r.dst == Plain("s1")]
    assert len(timed) == 1
    op = timed[0].op
    assert isinstance(op, Rewrite)
    assert op.old == r0
    assert render_region(op.new) == "{R:0} < {x:0, y:0}"


def test_timed_rule_fixpoint_self_loop():
    t = tiny([], clocks=())
    st = SymbolicTranslation(t)
    (rule,) = st.pda().rules_for(Plain("s1"), st.r0)
    assert isinstance(rule.op, Rewrite)
    assert rule.op.old == rule.op.new == st.r0
    assert rule.dst == Plain("s1")


def test_test_rules_gated_by_satisfaction():
    sat = tiny([TpdaRule("s1", TestOp("x", closed(0, 0)), "s2")])
    assert isinstance(check_reachability(sat, "s2"), Reachable)
    # the immediate region does not satisfy x=2, but waiting does
    later = tiny([TpdaRule("s1", TestOp("x", closed(2, 2)), "s2")])
    assert isinstance(check_reachability(later, "s2"), Reachable)
    # no test rule is emitted for an unsatisfied region: only the timed
    # self-rewrite is available at the initial region
    st = SymbolicTranslation(later)
    rules = st.pda().rules_for(Plain("s1"), st.r0)
    assert all(r.dst == Plain("s1") for r in rules)


def test_omega_satisfies_unbounded_guards_only():
    t = tiny([TpdaRule("s1", TestOp("x", unbounded(3, lo_closed=False)), "s2")])
    # x can only exceed 3 by blurring to omega (cmax is 3 here), and an
    # unbounded guard accepts omega
    assert isinstance(check_reachability(t, "s2"), Reachable)


def test_reset_rule_count_matches_placement_oracle():
    rng = random.Random(21)
    for _ in range(25):
        iv_lo = rng.randint(0, 2)
        iv = closed(iv_lo, rng.randint(iv_lo, 2))
        t = guarded([TpdaRule("s1", ResetOp("x", iv), "s2")],
                    clocks=("x", "y"))
        st = SymbolicTranslation(t)
        rules = st.pda().rules_for(Plain("s1"), st.r0)
        resets = [r for r in rules
                  if isinstance(r.op, Rewrite) and r.dst == Plain("s2")]
        expected = reset_insert(st.r0, X, iv)
        assert len(resets) == len(expected)
        assert {r.op.new for r in resets} == set(expected)
        assert (set(placement_oracle(st.r0.without(X), X, iv))
                == set(expected))


def test_refresh_goldens():
    low = Region.make([[(R, 0), (X, 0)]], 2)
    up0 = Region.make([[(R, 0), (ref_item(True), 0), (X, 0),
                        (clock_item("x", True), 0), (sym_item("a"), 0)]], 2)
    ks = refresh(low, up0)
    assert ks and ks[0][0] == 0 and ks[0][1] == low

    up1 = Region.make([[(R, 0), (ref_item(True), 1), (X, 0),
                        (clock_item("x", True), 1), (sym_item("a"), 0)]], 2)
    out = refresh(low, up1)
    assert [(k, render_region(r)) for k, r in out] == [(2, "{R:1, x:1}")]


def test_refresh_multiple_matches_under_omega():
    """Once values blur to omega, several rotations of the lower region
    project identically onto the upper region's shadows; all must be
    returned."""
    low = Region.make(
        [[(R, OMEGA), (X, OMEGA), (sym_item("a"), OMEGA)],
         [(clock_item("x", True), OMEGA)]], 1)
    up = Region.make(
        [[(R, 0)],
         [(ref_item(True), OMEGA), (clock_item("x", True), OMEGA),
          (sym_item("a", True), OMEGA)],
         [(X, 0)], [(sym_item("b"), 0)]], 1)
    out = refresh(low, up)
    assert [k for k, _ in out] == [1, 2, 3]
    assert [render_region(r) for _, r in out] == [
        "{} < {R:w, x:w, a:w} < {x.:w}",
        "{x.:w} < {R:w, x:w, a:w}",
        "{} < {x.:w} < {R:w, x:w, a:w}",
    ]


def test_merge_trivial_bottom():
    low = Region.make([[(R, 0), (X, 0)]], 2)
    (up,) = push_regions(low, "a", closed(0, 0))
    out = merge(low, up)
    assert out == [low]


def test_one_push_round_trip_merged_region():
    t = tiny([
        TpdaRule("s1", PushOp("a", closed(1, 1)), "s2"),
        TpdaRule("s2", TestOp("x", closed(1, 1)), "s3"),
        TpdaRule("s3", PopOp("a", closed(2, 2)), "s4"),
    ])
    verdict, stats = analyze(t, "s4")
    assert isinstance(verdict, Reachable)
    pops = [s for s in verdict.witness.steps if isinstance(s.op, Pop)]
    assert len(pops) == 1 and isinstance(pops[0].dst, MidPopTop)
    # the merged region lands via the final rewrite of the region below
    last = verdict.witness.steps[-1].op
    assert isinstance(last, Rewrite)
    assert render_region(last.new) == "{R:0, x:1}"
    assert stats.regions > 0 and stats.rules > 0


def test_pop_on_bottom_region_impossible():
    t = tiny([TpdaRule("s1", PopOp("a", closed(0, 0)), "s2")])
    st = SymbolicTranslation(t)
    rules = st.pda().rules_for(Plain("s1"), st.r0)
    assert not any(isinstance(r.op, Pop) for r in rules)
    assert isinstance(check_reachability(t, "s2"), Unreachable)


def test_pop_age_guard_blocks_after_forced_wait():
    assert isinstance(check_reachability(blocked_after_reset(), "s4"),
                      Unreachable)
    assert isinstance(check_reachability(blocked_after_reset(), "s3"),
                      Reachable)


def test_push_test_pop_symbolic_truth_matches_oracle():
    """Cross-validation freeze: both engines agree all four states are
    reachable (time may pass before the push; x is never reset)."""
    t = push_test_pop()
    assert reachable_tpda_states(t) == {"s1", "s2", "s3", "s4"}
    assert grid_oracle(t, 10, 8) == {"s1", "s2", "s3", "s4"}


def test_untimed_embedding_random():
    rng = random.Random(22)
    for _ in range(6):
        t = random_tpda(rng, ops="untimed")
        assert reachable_tpda_states(t) == reachable_states(untimed_pda(t))


def test_stack_free_embedding_random():
    rng = random.Random(23)
    for _ in range(6):
        t = random_tpda(rng, ops="stackfree")
        assert reachable_tpda_states(t) == region_graph_reach(t)


def test_reference_clock_discipline_in_generated_rules():
    rng = random.Random(24)
    for _ in range(8):
        t = random_tpda(rng, ModelSpace(max_states=3, max_rules=4))
        st = SymbolicTranslation(t)
        reachable_states(st.pda())
        for (state, top), rules in st._cache.items():
            for rule in rules:
                if isinstance(rule.op, Push):
                    assert rule.op.symbol.position_of(R) == (0, 0)
                elif isinstance(rule.op, Rewrite):
                    assert rule.op.new.position_of(R) == (0, 0)


def test_witness_replay_on_random_models():
    rng = random.Random(25)
    replayed = 0
    for _ in range(30):
        t = random_tpda(rng, ModelSpace(max_states=3, max_rules=5))
        pda = SymbolicTranslation(t).pda()
        try:
            sat = saturate(pda, 50_000)
        except SearchBudgetExceeded:
            continue
        found = sat.reachable()
        for target in t.states:
            if Plain(target) not in found:
                continue
            witness = sat.witness(Plain(target))
            final = witness_replay(pda, witness)
            assert final.state == Plain(target)
            replayed += 1
    assert replayed > 20


def test_note_region_rejects_malformed_stack_symbols():
    t = tiny([])
    st = SymbolicTranslation(t)
    bad = Region.make([[(X, 0)]], 2)  # no reference clock at all
    with pytest.raises(TranslationError):
        st._note_region(bad)


def test_analyze_rejects_invalid_models():
    from tpreach.pushdown import ModelError
    bad = tiny([TpdaRule("s1", TestOp("zz", closed(0, 1)), "s2")])
    with pytest.raises(ModelError):
        analyze(bad, "s2")
