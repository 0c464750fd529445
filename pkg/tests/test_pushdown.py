"""Pushdown engine: step semantics, saturation, witnesses, replay."""

import random

import pytest

from tpreach.pushdown import (ModelError, Nop, Pda, PdaConfig, PdaRule, Pop,
                              Push, Reachable, ReplayError, Unreachable,
                              Witness, bounded_bfs, is_state_reachable,
                              pda_step, reachable_states, witness_replay)


def prose_pda() -> Pda:
    states = frozenset({"s1", "s2", "s3", "s4", "s5", "s6"})
    rules = (
        PdaRule("s1", Push("a"), "s2"),
        PdaRule("s2", Push("b"), "s3"),
        PdaRule("s3", Pop("b"), "s4"),
        PdaRule("s3", Nop(), "s5"),
        PdaRule("s5", Pop("a"), "s6"),
    )
    return Pda(init="s1", states=states, alphabet=frozenset({"a", "b"}),
               rules=rules)


def test_pda_step_examples():
    p = prose_pda()
    assert pda_step(p, PdaConfig("s1", ())) == {PdaConfig("s2", ("a",))}
    assert pda_step(p, PdaConfig("s3", ("b", "a"))) == {
        PdaConfig("s4", ("a",)), PdaConfig("s5", ("b", "a"))}
    lonely = Pda(init="s", rules=(PdaRule("s", Pop("a"), "t"),))
    assert pda_step(lonely, PdaConfig("s", ())) == set()


def test_pda_step_unknown_state():
    with pytest.raises(ModelError):
        pda_step(prose_pda(), PdaConfig("zz", ()))


def test_prose_pda_verdicts_and_witness():
    p = prose_pda()
    verdict = is_state_reachable(p, "s4")
    assert isinstance(verdict, Reachable)
    ops = [step.op for step in verdict.witness.steps]
    assert ops == [Push("a"), Push("b"), Pop("b")]
    assert witness_replay(p, verdict.witness) == PdaConfig("s4", ("a",))
    assert isinstance(is_state_reachable(p, "s6"), Unreachable)
    assert reachable_states(p) == {"s1", "s2", "s3", "s4", "s5"}


def test_initial_state_trivially_reachable():
    verdict = is_state_reachable(prose_pda(), "s1")
    assert isinstance(verdict, Reachable)
    assert verdict.witness.steps == ()


def test_undeclared_target_rejected():
    with pytest.raises(ModelError):
        is_state_reachable(prose_pda(), "nope")


def test_no_rules_reaches_only_init():
    assert reachable_states(Pda(init="q")) == {"q"}


def test_bounded_bfs():
    p = prose_pda()
    assert bounded_bfs(p, 0) == {PdaConfig("s1", ())}
    two = bounded_bfs(p, 2)
    assert PdaConfig("s3", ("b", "a")) in two
    assert two <= bounded_bfs(p, 3)
    assert {c.state for c in bounded_bfs(p, 12)} <= reachable_states(p)


def test_witness_replay_failures():
    p = prose_pda()
    assert witness_replay(p, Witness(())) == PdaConfig("s1", ())
    bad = Witness((PdaRule("s1", Pop("a"), "s2"),))
    with pytest.raises(ReplayError) as exc:
        witness_replay(p, bad)
    assert exc.value.step == 0


def test_streamed_rules_match_explicit():
    p = prose_pda()

    def source(state, top):
        return [r for r in p.rules
                if r.src == state
                and (isinstance(r.op, (Push, Nop))
                     or (top is not None and r.op.symbol == top))]

    lazy = Pda(init="s1", rule_source=source)
    assert reachable_states(lazy) == reachable_states(p)
    verdict = is_state_reachable(lazy, "s4")
    assert isinstance(verdict, Reachable)
    assert witness_replay(lazy, verdict.witness).state == "s4"


def test_streamed_rule_with_undeclared_state_rejected():
    def source(state, top):
        return [PdaRule("s1", Push("a"), "ghost")]

    lazy = Pda(init="s1", states=frozenset({"s1"}), rule_source=source)
    with pytest.raises(ModelError):
        reachable_states(lazy)


def random_pda(rng: random.Random) -> Pda:
    states = tuple(f"q{i}" for i in range(1, rng.randint(2, 5) + 1))
    symbols = tuple("abc"[:rng.randint(1, 3)])
    rules = []
    for _ in range(rng.randint(1, 10)):
        op = rng.choice([Push(rng.choice(symbols)),
                         Pop(rng.choice(symbols)), Nop()])
        rules.append(PdaRule(rng.choice(states), op, rng.choice(states)))
    return Pda(init=states[0], states=frozenset(states),
               alphabet=frozenset(symbols), rules=tuple(rules))


def test_random_pdas_saturation_vs_bfs():
    """Saturation equals deep BFS plus replay-validated extra states."""
    rng = random.Random(20260819)
    for _ in range(60):
        p = random_pda(rng)
        sat = reachable_states(p)
        bfs_states = {c.state for c in bounded_bfs(p, 12)}
        assert bfs_states <= sat
        for s in sat:
            verdict = is_state_reachable(p, s)
            assert isinstance(verdict, Reachable)
            assert witness_replay(p, verdict.witness).state == s
