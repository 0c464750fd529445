"""Independent oracles used to cross-validate the library.

Each oracle deliberately avoids the code path it is meant to check:

* `placement_oracle` enumerates item insertions by abstracting concrete
  valuations through `region_of`, never touching the combinatorial
  placement enumeration in `insert_placements`.
* `region_graph_reach` explores a stack-free TPDA directly on the
  region graph, never touching the PDA translation or saturation.
* `untimed_pda` strips a guard-free TPDA down to the plain PDA it
  encodes, so the generic pushdown engine can adjudicate.
"""

from __future__ import annotations

from fractions import Fraction

from tpreach.pushdown import Nop, Pda, PdaRule, Pop, Push
from tpreach.regions import (Region, clock_item, ref_item, region_of,
                             reset_insert, satisfies, time_successors)
from tpreach.tpda import (Interval, NopOp, PopOp, PushOp, ResetOp, TestOp,
                          Tpda, compute_cmax)
from tpreach.regions import OMEGA


def placement_oracle(base: Region, it, iv: Interval) -> set[Region]:
    """All regions obtainable by inserting `it` into `base` so that the
    inserted item satisfies `iv`, computed from concrete valuations.

    `base` must not contain `it`.  A representative valuation of `base`
    is fixed, then every grid value for `it` fine enough to realise
    every fractional position (equal to, between, before and after each
    existing group) is abstracted back through `region_of`.
    """
    assert not base.has_item(it)
    k = len(base.sets) - 1
    rep = {}
    for j, group in enumerate(base.sets):
        frac = Fraction(j, k + 1)
        for jt, v in group:
            integral = base.cmax + 1 if v is OMEGA else v
            rep[jt] = integral + frac
    out = set()
    den = 2 * (k + 1)
    for m in range(0, (base.cmax + 2) * den + 1):
        x = Fraction(m, den)
        if not iv.contains(x):
            continue
        val = dict(rep)
        val[it] = x
        out.add(region_of(val, base.cmax))
    return out


def reset_oracle(r: Region, it, iv: Interval) -> set[Region]:
    return placement_oracle(r.without(it), it, iv)


def region_graph_reach(t: Tpda) -> set[str]:
    """States of a stack-free TPDA reachable on the region graph."""
    cmax = compute_cmax(t)
    v0 = {clock_item(c): 0 for c in t.clocks}
    v0[ref_item()] = 0
    r0 = region_of(v0, cmax)
    seen = {(t.init, r0)}
    frontier = [(t.init, r0)]
    states = {t.init}
    while frontier:
        state, region = frontier.pop()
        succs = [(state, r2) for r2 in time_successors(region)[1:]]
        for rule in t.rules:
            if rule.src != state:
                continue
            op = rule.op
            if isinstance(op, NopOp):
                succs.append((rule.dst, region))
            elif isinstance(op, TestOp):
                if satisfies(region, clock_item(op.clock), op.interval):
                    succs.append((rule.dst, region))
            elif isinstance(op, ResetOp):
                for r2 in reset_insert(region, clock_item(op.clock), op.interval):
                    succs.append((rule.dst, r2))
            else:  # pragma: no cover - caller promises stack-free input
                raise ValueError(f"not stack-free: {rule}")
        for nxt in succs:
            if nxt not in seen:
                seen.add(nxt)
                states.add(nxt[0])
                frontier.append(nxt)
    return states


def untimed_pda(t: Tpda) -> Pda:
    """The plain PDA a TPDA degenerates to when no guard can block.

    Only meaningful when every interval in `t` is [0:inf); tests/resets
    then always succeed and ages never matter.
    """
    rules = []
    for rule in t.rules:
        op = rule.op
        if isinstance(op, PushOp):
            mapped = Push(op.symbol)
        elif isinstance(op, PopOp):
            mapped = Pop(op.symbol)
        else:
            mapped = Nop()
        rules.append(PdaRule(rule.src, mapped, rule.dst))
    return Pda(init=t.init, states=frozenset(t.states),
               alphabet=frozenset(t.alphabet), rules=tuple(rules))
