"""Seeded random model generators for sweeps and property tests.

Everything here is deterministic in the provided ``random.Random``: the
sweep scripts and the test suite share one source of models so that a
failure seen in one place can be replayed in the other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .tpda import (Interval, NopOp, PopOp, PushOp, ResetOp, TestOp, Tpda,
                   TpdaRule, closed, unbounded)


@dataclass(frozen=True)
class ModelSpace:
    """Size bounds for generated timed pushdown automata."""

    max_states: int = 4
    max_clocks: int = 2
    max_symbols: int = 2
    max_endpoint: int = 2
    max_rules: int = 6


def random_interval(rng: random.Random, max_endpoint: int) -> Interval:
    """An interval with small endpoints, biased toward point intervals.

    Narrow intervals keep the concrete oracle's branching factor low
    without losing coverage of the open/closed/unbounded forms.
    """
    lo = rng.randint(0, max_endpoint)
    roll = rng.random()
    if roll < 0.45:
        return closed(lo, lo)
    if roll < 0.80:
        hi = rng.randint(lo, max_endpoint)
        if lo == hi:
            return closed(lo, hi)
        kind = rng.randrange(4)
        return Interval(lo, kind in (0, 1), hi, kind in (0, 2))
    return unbounded(lo, rng.random() < 0.5)


def random_tpda(rng: random.Random, space: ModelSpace = ModelSpace(),
                ops: str = "all") -> Tpda:
    """A random small TPDA.

    `ops` restricts the rule repertoire: "all", "untimed" (every guard
    is [0:inf), so timing never blocks anything), or "stackfree" (no
    push/pop rules at all).

    Untimed models also skip reset rules.  With trivial guards no rule
    ever consults a clock, so a reset cannot change which runs are
    possible; keeping them would only spend rule budget on moves the
    untimed comparison cannot tell apart from nops.
    """
    n_states = rng.randint(2, space.max_states)
    states = tuple(f"s{i}" for i in range(1, n_states + 1))
    clocks = tuple(f"x{i}" for i in range(1, rng.randint(1, space.max_clocks) + 1))
    alphabet = tuple(f"a{i}" for i in range(1, rng.randint(1, space.max_symbols) + 1))
    anything = unbounded(0)

    def interval() -> Interval:
        if ops == "untimed":
            return anything
        return random_interval(rng, space.max_endpoint)

    kinds = ["nop", "test", "reset", "push", "pop"]
    weights = [1, 3, 2, 3, 3]
    if ops == "stackfree":
        kinds, weights = kinds[:3], weights[:3]
    elif ops == "untimed":
        kinds = ["nop", "test", "push", "pop"]
        weights = [1, 3, 3, 3]

    rules = []
    for _ in range(rng.randint(1, space.max_rules)):
        src = rng.choice(states)
        dst = rng.choice(states)
        kind = rng.choices(kinds, weights)[0]
        if kind == "nop":
            op = NopOp()
        elif kind == "test":
            op = TestOp(rng.choice(clocks), interval())
        elif kind == "reset":
            op = ResetOp(rng.choice(clocks), interval())
        elif kind == "push":
            op = PushOp(rng.choice(alphabet), interval())
        else:
            op = PopOp(rng.choice(alphabet), interval())
        rules.append(TpdaRule(src, op, dst))
    return Tpda(states=states, init="s1", clocks=clocks,
                alphabet=alphabet, rules=tuple(rules))


def random_fraction(rng: random.Random, hi: int, max_den: int = 6) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, hi * den), den)
