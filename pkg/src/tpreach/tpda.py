"""Timed pushdown automata: model, validation, and concrete semantics.

Clocks and stack-symbol ages range over the nonnegative rationals and
all grow at rate one when time passes.  A rule performs a single
operation: nop, a clock test against an interval, a nondeterministic
clock reset into an interval, a push whose initial age is drawn from an
interval, or a pop that requires the topmost symbol and its age to
match.

`grid_oracle` explores these semantics directly, restricting delays and
nondeterministic choices to a rational grid.  Everything it reports
reachable genuinely is; it is the ground truth the symbolic analysis is
measured against.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union


@dataclass(frozen=True)
class Interval:
    """An interval with natural endpoints; hi=None means unbounded."""

    lo: int
    lo_closed: bool
    hi: Optional[int]
    hi_closed: bool

    def is_empty(self) -> bool:
        if self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, value) -> bool:
        if self.lo_closed:
            if value < self.lo:
                return False
        elif value <= self.lo:
            return False
        if self.hi is None:
            return True
        if self.hi_closed:
            return value <= self.hi
        return value < self.hi

    def render(self) -> str:
        lo = "[" if self.lo_closed else "("
        hi = "]" if self.hi_closed else ")"
        top = "inf" if self.hi is None else str(self.hi)
        return f"{lo}{self.lo}:{top}{hi}"


def closed(lo: int, hi: int) -> Interval:
    return Interval(lo, True, hi, True)


def unbounded(lo: int, lo_closed: bool = True) -> Interval:
    return Interval(lo, lo_closed, None, False)


@dataclass(frozen=True)
class NopOp:
    pass


@dataclass(frozen=True)
class TestOp:
    clock: str
    interval: Interval


@dataclass(frozen=True)
class ResetOp:
    clock: str
    interval: Interval


@dataclass(frozen=True)
class PushOp:
    symbol: str
    interval: Interval


@dataclass(frozen=True)
class PopOp:
    symbol: str
    interval: Interval


TpdaOp = Union[NopOp, TestOp, ResetOp, PushOp, PopOp]


@dataclass(frozen=True)
class TpdaRule:
    src: str
    op: TpdaOp
    dst: str


@dataclass(frozen=True)
class Tpda:
    states: frozenset[str]
    init: str
    clocks: frozenset[str]
    alphabet: frozenset[str]
    rules: tuple[TpdaRule, ...]


def validate(t: Tpda) -> list[str]:
    """Model errors as human-readable strings; empty list means well-formed."""
    errors = []
    if t.init not in t.states:
        errors.append(f"initial state {t.init!r} is not declared")
    for rule in t.rules:
        where = f"rule {rule.src} -> {rule.dst}"
        for s in (rule.src, rule.dst):
            if s not in t.states:
                errors.append(f"{where}: undeclared state {s!r}")
        op = rule.op
        if isinstance(op, (TestOp, ResetOp)) and op.clock not in t.clocks:
            errors.append(f"{where}: undeclared clock {op.clock!r}")
        if isinstance(op, (PushOp, PopOp)) and op.symbol not in t.alphabet:
            errors.append(f"{where}: undeclared stack symbol {op.symbol!r}")
        if isinstance(op, NopOp):
            continue
        iv = op.interval
        if iv.lo < 0 or (iv.hi is not None and iv.hi < 0):
            errors.append(f"{where}: negative interval endpoint in {iv.render()}")
        if iv.hi is None and iv.hi_closed:
            errors.append(f"{where}: unbounded interval cannot be closed above")
        if iv.is_empty():
            errors.append(f"{where}: empty interval {iv.render()}")
    return errors


def compute_cmax(t: Tpda) -> int:
    """Largest finite interval endpoint appearing in the rules (0 if none)."""
    cmax = 0
    for rule in t.rules:
        if isinstance(rule.op, NopOp):
            continue
        iv = rule.op.interval
        cmax = max(cmax, iv.lo)
        if iv.hi is not None:
            cmax = max(cmax, iv.hi)
    return cmax


@dataclass(frozen=True)
class TpdaConfig:
    """Control state, clock valuation, and aged stack (topmost first).

    Clock values are kept as a sorted tuple of (name, value) pairs so
    configurations are hashable; values are exact rationals.
    """

    state: str
    clocks: tuple[tuple[str, Fraction], ...]
    stack: tuple[tuple[str, Fraction], ...] = ()

    def clock(self, name: str) -> Fraction:
        for n, v in self.clocks:
            if n == name:
                return v
        raise KeyError(name)


def initial_config(t: Tpda) -> TpdaConfig:
    clocks = tuple((c, Fraction(0)) for c in sorted(t.clocks))
    return TpdaConfig(t.init, clocks, ())


def timed_step(config: TpdaConfig, delay: Fraction) -> TpdaConfig:
    """Let `delay` time units pass: every clock and every age grows."""
    if delay <= 0:
        raise ValueError(f"delay must be positive, got {delay}")
    return TpdaConfig(
        config.state,
        tuple((n, v + delay) for n, v in config.clocks),
        tuple((a, v + delay) for a, v in config.stack),
    )


def _grid_values(iv: Interval, denominator: int, cap: Fraction) -> list[Fraction]:
    out = []
    k = 0
    while True:
        v = Fraction(k, denominator)
        if v > cap:
            break
        if iv.contains(v):
            out.append(v)
        if iv.hi is not None and v > iv.hi:
            break
        k += 1
    return out


def discrete_step(t: Tpda, config: TpdaConfig, denominator: int) -> set[TpdaConfig]:
    """All one-rule successors, with nondeterministic values drawn from
    the grid {k/denominator : 0 <= k/denominator <= cmax+1}."""
    if denominator < 1:
        raise ValueError("denominator must be a positive integer")
    cap = Fraction(compute_cmax(t) + 1)
    out = set()
    for rule in t.rules:
        if rule.src != config.state:
            continue
        op = rule.op
        if isinstance(op, NopOp):
            out.add(TpdaConfig(rule.dst, config.clocks, config.stack))
        elif isinstance(op, TestOp):
            if op.interval.contains(config.clock(op.clock)):
                out.add(TpdaConfig(rule.dst, config.clocks, config.stack))
        elif isinstance(op, ResetOp):
            for v in _grid_values(op.interval, denominator, cap):
                clocks = tuple((n, v if n == op.clock else old)
                               for n, old in config.clocks)
                out.add(TpdaConfig(rule.dst, clocks, config.stack))
        elif isinstance(op, PushOp):
            for v in _grid_values(op.interval, denominator, cap):
                out.add(TpdaConfig(rule.dst, config.clocks,
                                   ((op.symbol, v),) + config.stack))
        elif isinstance(op, PopOp):
            if config.stack:
                sym, age = config.stack[0]
                if sym == op.symbol and op.interval.contains(age):
                    out.add(TpdaConfig(rule.dst, config.clocks, config.stack[1:]))
    return out


def _scaled_contains(iv: Interval, n: int, denominator: int) -> bool:
    """`iv.contains(n / denominator)` without leaving the integers."""
    lo = iv.lo * denominator
    if iv.lo_closed:
        if n < lo:
            return False
    elif n <= lo:
        return False
    if iv.hi is None:
        return True
    hi = iv.hi * denominator
    return n <= hi if iv.hi_closed else n < hi


def grid_oracle(t: Tpda, max_steps: int, denominator: int,
                stop_states=None) -> set[str]:
    """States reachable within `max_steps` rule firings and grid delays.

    BFS over concrete configurations; each step is either one rule or
    one delay from {k/denominator : 1 <= k/denominator <= cmax+1}.
    Every reachable value is a grid point, so values are stored as
    integers scaled by the denominator, truncated at cmax+1 — harmless,
    because once past every constant a value's exact size can never
    matter again (no guard endpoint exceeds cmax, and values only
    grow), and it keeps the search space finite.

    When `stop_states` is given, exploration stops early as soon as all
    of those states have been seen (the result may then be a subset of
    the full bounded exploration; every returned state is still truly
    reachable).
    """
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    if denominator < 1:
        raise ValueError("denominator must be a positive integer")
    cap = (compute_cmax(t) + 1) * denominator
    delays = range(1, cap + 1)
    names = sorted(t.clocks)
    slot = {n: i for i, n in enumerate(names)}
    by_src: dict[str, list] = {}
    for rule in t.rules:
        op = rule.op
        choices = None
        if isinstance(op, (ResetOp, PushOp)):
            choices = [k for k in range(cap + 1)
                       if _scaled_contains(op.interval, k, denominator)]
        by_src.setdefault(rule.src, []).append((rule, choices))

    start = (t.init, (0,) * len(names), ())
    seen_states = {t.init}
    visited = {start}
    frontier = [start]
    targets = None if stop_states is None else set(stop_states)

    def emit(c, nxt):
        if c not in visited:
            visited.add(c)
            seen_states.add(c[0])
            nxt.append(c)

    for _ in range(max_steps):
        if targets is not None and targets <= seen_states:
            break
        nxt: list = []
        for state, clocks, stack in frontier:
            for rule, choices in by_src.get(state, ()):
                op = rule.op
                if isinstance(op, NopOp):
                    emit((rule.dst, clocks, stack), nxt)
                elif isinstance(op, TestOp):
                    if _scaled_contains(op.interval, clocks[slot[op.clock]],
                                        denominator):
                        emit((rule.dst, clocks, stack), nxt)
                elif isinstance(op, ResetOp):
                    i = slot[op.clock]
                    for v in choices:
                        emit((rule.dst, clocks[:i] + (v,) + clocks[i + 1:],
                              stack), nxt)
                elif isinstance(op, PushOp):
                    for v in choices:
                        emit((rule.dst, clocks, ((op.symbol, v),) + stack),
                             nxt)
                else:  # PopOp
                    if stack:
                        sym, age = stack[0]
                        if sym == op.symbol and _scaled_contains(
                                op.interval, age, denominator):
                            emit((rule.dst, clocks, stack[1:]), nxt)
            for d in delays:
                emit((state,
                      tuple(min(v + d, cap) for v in clocks),
                      tuple((a, min(v + d, cap)) for a, v in stack)), nxt)
        if not nxt:
            break
        frontier = nxt
    return seen_states
