"""Reduction of timed-pushdown reachability to plain PDA reachability.

The symbolic PDA's stack symbols are regions.  The bottommost region
tracks the clocks and the reference item; every region above it also
carries the age of one stack symbol plus shadow items mirroring where
the region below sat when the push happened.  Because the shadows age
along with everything else, the topmost region alone decides which
rules fire, and a pop can re-synchronise the region below by rotating
it until it lines up with the shadows — no global clock data is needed.

Rules are streamed to the saturation engine on demand, keyed on the
control state and the current topmost region, so only the regions a
computation can actually build are ever materialised.

Timed, test, and reset rules replace the topmost region in place (a
rewrite, one rule each).  Only pop needs an intermediate control state,
because it genuinely touches two stack symbols: the popped region rides
along in the control state while the region below is rewritten to their
refresh-and-merge result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Optional

from .pushdown import (ModelError, Nop, Pda, PdaRule, Pop, Push, Rewrite,
                       Verdict, is_state_reachable, saturate)
from .regions import (Item, Region, RegionError, clock_item,
                      insert_placements, is_bottom_shape, is_stack_shape,
                      item_key, ref_item, region_sort_key, reset_insert,
                      rotate, satisfies, sym_item)
from .tpda import (NopOp, PopOp, PushOp, ResetOp, TestOp, Tpda, TpdaRule,
                   compute_cmax, validate)


class TranslationError(AssertionError):
    """An internal invariant of the symbolic construction was violated."""


@dataclass(frozen=True)
class Start:
    """Artificial initial control state; its only move installs the
    bottommost region."""


@dataclass(frozen=True)
class Plain:
    state: str


@dataclass(frozen=True)
class MidPopTop:
    """Top region popped and in hand; the next step reads the region
    below and rewrites it to a refresh-and-merge result."""

    rule: Hashable
    top: Region


@dataclass(frozen=True)
class TranslationStats:
    regions: int
    mid_states: int
    rules: int


def initial_region(t: Tpda) -> Region:
    cmax = compute_cmax(t)
    group0 = [(ref_item(), 0)] + [(clock_item(c), 0) for c in sorted(t.clocks)]
    return Region.make([group0], cmax)


def push_regions(top: Region, symbol: str, iv) -> list[Region]:
    """Regions a push of `symbol` with initial age in `iv` can install.

    The new region copies the plain clocks and reference item of the old
    top, lays a fresh shadow twin beside each of them, turns the old
    top's plain stack symbol (if any) into its shadow, drops the old
    top's own shadows, and inserts the new symbol anywhere `iv` allows.
    """
    groups = []
    for i, group in enumerate(top.sets):
        new_group = []
        for it, v in group:
            if it.shadow:
                continue
            if it.kind == "sym":
                new_group.append((Item(it.kind, it.name, True), v))
            else:
                new_group.append((it, v))
                new_group.append((Item(it.kind, it.name, True), v))
        if new_group or i == 0:
            groups.append(new_group)
    base = Region.make(groups, top.cmax)
    return insert_placements(base, sym_item(symbol), iv)


def _strip(it: Item) -> Item:
    return Item(it.kind, it.name, False)


def _projection(r: Region, shadows: bool) -> tuple:
    """The region restricted to its shadow (or plain) items, relabelled
    to plain; the first group's slot is kept even when empty."""
    out = []
    for i, group in enumerate(r.sets):
        kept = sorted(((_strip(it), v) for it, v in group
                       if it.shadow == shadows), key=lambda p: item_key(p[0]))
        if i == 0:
            out.append(tuple(kept))
        elif kept:
            out.append(tuple(kept))
    return tuple(out)


def refresh(lower: Region, upper: Region) -> list[tuple[int, Region]]:
    """Rotations of `lower` (reference item released) whose plain items
    line up, group for group and value for value, with `upper`'s shadow
    items.  Several rotation counts can match once omega has blurred
    values apart; all are returned.  An empty list means the pop cannot
    be simulated along this pairing."""
    lower_plains = {it for it in lower.items() if not it.shadow}
    upper_shadow_plains = {_strip(it) for it in upper.items() if it.shadow}
    if lower_plains != upper_shadow_plains:
        return []
    target = _projection(upper, shadows=True)
    matches = []
    seen = set()
    cur = lower
    k = 0
    while cur not in seen:
        seen.add(cur)
        if _projection(cur, shadows=False) == target:
            matches.append((k, cur))
        cur = rotate(cur, move_ref=True)
        k += 1
    return matches


def merge(lower_rot: Region, upper: Region) -> list[Region]:
    """All regions that can become the new top after a pop.

    The matched pairs (lower's plain items against upper's shadows)
    anchor both regions on one frame.  The merged region keeps lower's
    plain stack symbol and shadow items and upper's plain clocks and
    reference item, each at its source position relative to that frame.
    Items from opposite sides that fall strictly inside the same gap
    between anchor groups have no determined fractional order, so every
    consistent interleaving is produced.
    """
    if _projection(lower_rot, shadows=False) != _projection(upper, shadows=True):
        raise RegionError("merge requires a refreshed lower region")
    if lower_rot.cmax != upper.cmax:
        raise RegionError("merge requires a common cmax")

    def decompose(r: Region, is_skeleton, is_kept):
        """group 0 kept items, per-slot glued kept items, per-gap group
        lists of kept items."""
        first = tuple(p for p in r.sets[0] if is_kept(p[0]))
        glued, gaps = [], [[]]
        for group in r.sets[1:]:
            kept = tuple(p for p in group if is_kept(p[0]))
            if any(is_skeleton(it) for it, _v in group):
                glued.append(kept)
                gaps.append([])
            elif kept:
                gaps[-1].append(kept)
        return first, glued, gaps

    # Anchors are exactly the matched pairs: every plain item of the
    # lower region against the corresponding shadow of the upper one.
    # The lower region's plain stack symbol is both an anchor and kept.
    lo_first, lo_glued, lo_gaps = decompose(
        lower_rot,
        is_skeleton=lambda it: not it.shadow,
        is_kept=lambda it: it.shadow or it.kind == "sym")
    up_first, up_glued, up_gaps = decompose(
        upper,
        is_skeleton=lambda it: it.shadow,
        is_kept=lambda it: not it.shadow and it.kind != "sym")
    if len(lo_glued) != len(up_glued) or len(lo_gaps) != len(up_gaps):
        raise RegionError("merge requires aligned anchor structure")

    gap_choices = []
    for lg, ug in zip(lo_gaps, up_gaps):
        gap_choices.append(list(_weave(lg, ug)))
    out = set()
    for choice in itertools.product(*gap_choices):
        groups = [lo_first + up_first]
        for slot in range(len(lo_glued) + 1):
            for g in choice[slot]:
                groups.append(g)
            if slot < len(lo_glued):
                glued = lo_glued[slot] + up_glued[slot]
                if glued:
                    groups.append(glued)
        out.add(Region.make(groups, upper.cmax))
    return sorted(out, key=region_sort_key)


def _weave(xs, ys):
    """Every interleaving of two group sequences that keeps each
    sequence's own order; aligned groups may also fuse."""
    if not xs:
        yield tuple(ys)
        return
    if not ys:
        yield tuple(xs)
        return
    for rest in _weave(xs[1:], ys):
        yield (xs[0],) + rest
    for rest in _weave(xs, ys[1:]):
        yield (ys[0],) + rest
    for rest in _weave(xs[1:], ys[1:]):
        yield (xs[0] + ys[0],) + rest


def _is_trivial_guard(iv) -> bool:
    """True for [0:inf), which every clock value satisfies."""
    return iv.hi is None and iv.lo == 0 and iv.lo_closed


def _drop_irrelevant_clocks(t: Tpda) -> Tpda:
    """Remove clocks that cannot influence which rules fire.

    A test against [0:inf) never blocks, so it is a nop; a clock that is
    only ever reset or tested trivially can be dropped outright, because
    its value is never consulted.  Every dropped clock would otherwise
    contribute a plain and a shadow item to each stack region, and the
    region alphabet grows exponentially with the item count.
    """
    relevant = {r.op.clock for r in t.rules
                if isinstance(r.op, TestOp) and not _is_trivial_guard(r.op.interval)}
    if relevant == set(t.clocks):
        return t
    rules = []
    for r in t.rules:
        inert_test = (isinstance(r.op, TestOp)
                      and r.op.clock not in relevant)
        inert_reset = (isinstance(r.op, ResetOp)
                       and r.op.clock not in relevant)
        rules.append(TpdaRule(r.src, NopOp(), r.dst)
                     if inert_test or inert_reset else r)
    return Tpda(states=t.states, init=t.init,
                clocks=tuple(c for c in t.clocks if c in relevant),
                alphabet=t.alphabet, rules=tuple(rules))


class SymbolicTranslation:
    """Lazily materialised symbolic PDA for one timed automaton."""

    def __init__(self, t: Tpda):
        errors = validate(t)
        if errors:
            raise ModelError("; ".join(errors))
        self.t = _drop_irrelevant_clocks(t)
        self.cmax = compute_cmax(self.t)
        self.r0 = initial_region(self.t)
        self._by_src: dict[str, list] = {}
        for rule in self.t.rules:
            self._by_src.setdefault(rule.src, []).append(rule)
        self._cache: dict = {}
        self._regions: set[Region] = {self.r0}
        self._mids: set = set()
        self._rule_count = 0

    def pda(self) -> Pda:
        return Pda(init=Start(), rule_source=self._rules_for)

    def stats(self) -> TranslationStats:
        return TranslationStats(regions=len(self._regions),
                                mid_states=len(self._mids),
                                rules=self._rule_count)

    def _rules_for(self, state, top: Optional[Region]) -> list[PdaRule]:
        key = (state, top)
        if key not in self._cache:
            rules = list(self._generate(state, top))
            for rule in rules:
                op = rule.op
                if isinstance(op, (Push, Pop)):
                    self._note_region(op.symbol)
                elif isinstance(op, Rewrite):
                    self._note_region(op.new)
                for endpoint in (rule.src, rule.dst):
                    if not isinstance(endpoint, (Plain, Start)):
                        self._mids.add(endpoint)
            self._rule_count += len(rules)
            self._cache[key] = rules
        return self._cache[key]

    def _note_region(self, r: Region) -> None:
        if r in self._regions:
            return
        if not (is_bottom_shape(r) or is_stack_shape(r)):
            raise TranslationError(f"malformed stack region: {r.sets}")
        self._regions.add(r)

    def _generate(self, state, top):
        if isinstance(state, Start):
            if top is None:
                yield PdaRule(state, Push(self.r0), Plain(self.t.init))
            return
        if isinstance(state, Plain):
            if top is None:
                return
            yield from self._plain_rules(state, top)
            return
        if isinstance(state, MidPopTop):
            # `top` is now the region that sat below the popped one; the
            # popped region travels in the control state.  Refreshing and
            # merging happen in one stroke: the region below is replaced
            # by every possible merge, no second intermediate state.
            if top is not None:
                merged = set()
                for _k, lower_rot in refresh(top, state.top):
                    merged.update(merge(lower_rot, state.top))
                for r in sorted(merged, key=region_sort_key):
                    yield PdaRule(state, Rewrite(top, r), Plain(state.rule.dst))
            return
        raise TranslationError(f"unknown control state {state!r}")

    def _plain_rules(self, state: Plain, top: Region):
        s = state.state
        yield PdaRule(state, Rewrite(top, rotate(top, move_ref=False)), state)
        for rule in self._by_src.get(s, ()):
            op = rule.op
            dst = Plain(rule.dst)
            if isinstance(op, NopOp):
                yield PdaRule(state, Nop(), dst)
            elif isinstance(op, TestOp):
                if satisfies(top, clock_item(op.clock), op.interval):
                    yield PdaRule(state, Rewrite(top, top), dst)
            elif isinstance(op, ResetOp):
                it = clock_item(op.clock)
                for r in reset_insert(top, it, op.interval):
                    yield PdaRule(state, Rewrite(top, r), dst)
            elif isinstance(op, PushOp):
                for r in push_regions(top, op.symbol, op.interval):
                    yield PdaRule(state, Push(r), dst)
            elif isinstance(op, PopOp):
                plain_sym = top.plain_symbol()
                if (plain_sym is not None and plain_sym.name == op.symbol
                        and satisfies(top, plain_sym, op.interval)):
                    yield PdaRule(state, Pop(top), MidPopTop(rule, top))


def _checked_target(t: Tpda, target: str) -> None:
    if target not in t.states:
        raise ModelError(f"target state {target!r} not declared")


def analyze(t: Tpda, target: str) -> tuple[Verdict, TranslationStats]:
    """Reachability verdict for `target` plus translation size counters."""
    _checked_target(t, target)
    translation = SymbolicTranslation(t)
    verdict = is_state_reachable(translation.pda(), Plain(target))
    return verdict, translation.stats()


def check_reachability(t: Tpda, target: str) -> Verdict:
    return analyze(t, target)[0]


def reachable_tpda_states(t: Tpda,
                          max_transitions: Optional[int] = None) -> set[str]:
    """Every control state of `t` some timed computation can visit.

    `max_transitions` caps the saturation size (SearchBudgetExceeded
    beyond it); None means run to the fixpoint no matter the cost.
    """
    translation = SymbolicTranslation(t)
    found = saturate(translation.pda(), max_transitions).reachable()
    return {q.state for q in found if isinstance(q, Plain)}
