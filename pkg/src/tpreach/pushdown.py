"""Pushdown automata with state reachability via post* saturation.

A PDA here is a finite control plus an unbounded stack.  Rules never
inspect the stack except through their operation: Push and Nop apply in
any configuration, Pop(a) applies only when the topmost symbol is `a`,
and Rewrite(a, b) applies only when the topmost symbol is `a`, which it
replaces by `b` without changing the stack's depth.
Rules can be given explicitly or streamed from a generator callback
keyed on (control state, topmost symbol or None for the empty stack),
which lets a client with a huge or open-ended alphabet feed the engine
only the rules that can actually fire.

State reachability is decided by saturating a small finite automaton
(the "P-automaton") whose language is the set of reachable
configurations.  Each saturated transition remembers how it was first
derived, so a rule-sequence witness can be read back without re-running
any search.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Union


class ModelError(ValueError):
    """A PDA definition or query refers to something undeclared."""


class SearchBudgetExceeded(RuntimeError):
    """Saturation grew past the caller-supplied transition budget."""


class ReplayError(ValueError):
    """A witness step could not be applied; `step` is its 0-based index."""

    def __init__(self, step: int, reason: str):
        super().__init__(f"witness step {step}: {reason}")
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class Push:
    symbol: Hashable


@dataclass(frozen=True)
class Pop:
    symbol: Hashable


@dataclass(frozen=True)
class Nop:
    pass


@dataclass(frozen=True)
class Rewrite:
    old: Hashable
    new: Hashable


StackOp = Union[Push, Pop, Nop, Rewrite]


@dataclass(frozen=True)
class PdaRule:
    src: Hashable
    op: StackOp
    dst: Hashable


@dataclass(frozen=True)
class PdaConfig:
    """A control state plus the stack, topmost symbol first."""

    state: Hashable
    stack: tuple = ()


@dataclass(frozen=True)
class Witness:
    """A replayable sequence of rules starting at (init, empty stack)."""

    steps: tuple[PdaRule, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Reachable:
    witness: Witness


@dataclass(frozen=True)
class Unreachable:
    pass


Verdict = Union[Reachable, Unreachable]

# Rule sources receive the topmost stack symbol, or None when the stack
# is empty, and return every rule of that state that may fire there.
RuleSource = Callable[[Hashable, Optional[Hashable]], Iterable[PdaRule]]


@dataclass(frozen=True)
class Pda:
    """A pushdown automaton with explicit or streamed rules.

    `states` and `alphabet` may be None, meaning open-ended: rule
    endpoints and symbols are then discovered as the rule source yields
    them.  When they are given, every rule (explicit or streamed) must
    stay inside them.
    """

    init: Hashable
    states: Optional[frozenset] = None
    alphabet: Optional[frozenset] = None
    rules: tuple[PdaRule, ...] = ()
    rule_source: Optional[RuleSource] = None
    _by_src: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.states is not None and self.init not in self.states:
            raise ModelError(f"initial state {self.init!r} not declared")
        for rule in self.rules:
            self._check_rule(rule)
            self._by_src.setdefault(rule.src, []).append(rule)

    def _check_rule(self, rule: PdaRule) -> None:
        if self.states is not None:
            for s in (rule.src, rule.dst):
                if s not in self.states:
                    raise ModelError(f"rule {rule} uses undeclared state {s!r}")
        if self.alphabet is not None:
            op = rule.op
            if isinstance(op, Rewrite):
                touched = (op.old, op.new)
            elif isinstance(op, Nop):
                touched = ()
            else:
                touched = (op.symbol,)
            for sym in touched:
                if sym not in self.alphabet:
                    raise ModelError(
                        f"rule {rule} uses undeclared symbol {sym!r}")

    def rules_for(self, state: Hashable, top: Optional[Hashable]) -> list[PdaRule]:
        """All rules of `state` that may fire with `top` on the stack."""
        if self.rule_source is not None:
            out = []
            for rule in self.rule_source(state, top):
                self._check_rule(rule)
                if rule.src != state:
                    raise ModelError(
                        f"rule source returned {rule} for state {state!r}")
                out.append(rule)
            return out
        return list(self._by_src.get(state, ()))


def _enabled(op: StackOp, stack: tuple) -> bool:
    if isinstance(op, Pop):
        return bool(stack) and stack[0] == op.symbol
    if isinstance(op, Rewrite):
        return bool(stack) and stack[0] == op.old
    return True


def _apply(op: StackOp, stack: tuple) -> tuple:
    if isinstance(op, Push):
        return (op.symbol,) + stack
    if isinstance(op, Pop):
        return stack[1:]
    if isinstance(op, Rewrite):
        return (op.new,) + stack[1:]
    return stack


def pda_step(pda: Pda, config: PdaConfig) -> set[PdaConfig]:
    """All one-rule successors of `config`."""
    if pda.states is not None and config.state not in pda.states:
        raise ModelError(f"unknown state {config.state!r}")
    top = config.stack[0] if config.stack else None
    out = set()
    for rule in pda.rules_for(config.state, top):
        if _enabled(rule.op, config.stack):
            out.add(PdaConfig(rule.dst, _apply(rule.op, config.stack)))
    return out


def bounded_bfs(pda: Pda, max_steps: int) -> set[PdaConfig]:
    """Every configuration reachable in at most `max_steps` rule firings."""
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    seen = {PdaConfig(pda.init)}
    frontier = [PdaConfig(pda.init)]
    for _ in range(max_steps):
        nxt = []
        for c in frontier:
            for succ in pda_step(pda, c):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        if not nxt:
            break
        frontier = nxt
    return seen


def witness_replay(pda: Pda, witness: Witness) -> PdaConfig:
    """Apply the witness from (init, empty stack); raise ReplayError if stuck."""
    config = PdaConfig(pda.init)
    for i, rule in enumerate(witness.steps):
        if rule.src != config.state:
            raise ReplayError(i, f"rule expects state {rule.src!r}, "
                                 f"automaton is in {config.state!r}")
        if isinstance(rule.op, Pop):
            if not config.stack:
                raise ReplayError(i, "pop on empty stack")
            if config.stack[0] != rule.op.symbol:
                raise ReplayError(i, f"pop expects {rule.op.symbol!r}, "
                                     f"top is {config.stack[0]!r}")
        elif isinstance(rule.op, Rewrite):
            if not config.stack:
                raise ReplayError(i, "rewrite on empty stack")
            if config.stack[0] != rule.op.old:
                raise ReplayError(i, f"rewrite expects {rule.op.old!r}, "
                                     f"top is {config.stack[0]!r}")
        config = PdaConfig(rule.dst, _apply(rule.op, config.stack))
    return config


# --- post* saturation -------------------------------------------------
#
# The P-automaton's nodes are the PDA control states, one _PushNode per
# (destination state, pushed symbol) pair, and a single final node.  A
# transition (q, g, q') means: some reachable configuration has control
# state q and a stack whose prefix reads g on a path to q'.  The stack
# bottom is modelled by a reserved symbol so that "empty stack" is an
# ordinary transition label and pops can never fall off the end.

_BOTTOM = "#bottom"
_FINAL = "#final"
_EPS = "#eps"


@dataclass(frozen=True)
class _PushNode:
    state: Hashable
    symbol: Hashable


# Derivation records: how a transition was first obtained.
@dataclass(frozen=True)
class _Init:
    pass


@dataclass(frozen=True)
class _ViaNop:
    rule: PdaRule
    premise: tuple


@dataclass(frozen=True)
class _ViaRewrite:
    rule: PdaRule
    premise: tuple


@dataclass(frozen=True)
class _ViaPop:
    rule: PdaRule
    premise: tuple


@dataclass(frozen=True)
class _ViaCombine:
    eps: tuple
    cont: tuple


@dataclass(frozen=True)
class _ViaPushHead:
    rule: PdaRule
    premise: tuple


@dataclass(frozen=True)
class _ViaPushTail:
    rule: PdaRule
    premise: tuple


class _Saturation:
    """post* of a PDA, built once and queried for states and witnesses."""

    def __init__(self, pda: Pda, max_transitions: Optional[int] = None):
        self.pda = pda
        self.max_transitions = max_transitions
        self.rel: dict[tuple, object] = {}      # transition -> derivation
        self.out_by_src: dict = {}              # node -> [non-eps transitions]
        self.eps_by_dst: dict = {}              # node -> [eps transitions]
        self.control_states: set = set()
        self.rules_fetched = 0
        self.symbols_seen: set = set()
        self._run()

    def _is_control(self, node) -> bool:
        return not isinstance(node, _PushNode) and node != _FINAL

    def _run(self) -> None:
        work = deque()
        work.append(((self.pda.init, _BOTTOM, _FINAL), _Init()))
        while work:
            trans, record = work.popleft()
            if trans in self.rel:
                continue
            if (self.max_transitions is not None
                    and len(self.rel) >= self.max_transitions):
                raise SearchBudgetExceeded(
                    f"more than {self.max_transitions} saturation transitions")
            self.rel[trans] = record
            q, label, q2 = trans
            if label == _EPS:
                self.eps_by_dst.setdefault(q2, []).append(trans)
                for cont in self.out_by_src.get(q2, ()):
                    work.append(((q, cont[1], cont[2]), _ViaCombine(trans, cont)))
                continue
            self.out_by_src.setdefault(q, []).append(trans)
            if label != _BOTTOM:
                self.symbols_seen.add(label)
            for eps in self.eps_by_dst.get(q, ()):
                work.append(((eps[0], label, q2), _ViaCombine(eps, trans)))
            if not self._is_control(q):
                continue
            self.control_states.add(q)
            top = None if label == _BOTTOM else label
            for rule in self.pda.rules_for(q, top):
                self.rules_fetched += 1
                op = rule.op
                if isinstance(op, Nop):
                    work.append(((rule.dst, label, q2), _ViaNop(rule, trans)))
                elif isinstance(op, Rewrite):
                    if top == op.old:
                        work.append(((rule.dst, op.new, q2),
                                     _ViaRewrite(rule, trans)))
                elif isinstance(op, Pop):
                    if top == op.symbol:
                        work.append(((rule.dst, _EPS, q2), _ViaPop(rule, trans)))
                elif isinstance(op, Push):
                    node = _PushNode(rule.dst, op.symbol)
                    work.append(((rule.dst, op.symbol, node),
                                 _ViaPushHead(rule, trans)))
                    work.append(((node, label, q2), _ViaPushTail(rule, trans)))

    def reachable(self) -> set:
        found = {self.pda.init} | self.control_states
        for (q, label, _q2) in self.rel:
            if label == _EPS and self._is_control(q):
                found.add(q)
        return found

    def witness(self, target) -> Optional[Witness]:
        """Shortest-by-discovery rule sequence reaching `target`, if any."""
        if target == self.pda.init:
            return Witness(())
        path = self._accepting_path(target)
        if path is None:
            return None
        return Witness(tuple(self._unwind(path)))

    def _accepting_path(self, target) -> Optional[list[tuple]]:
        # BFS over non-eps transitions from `target` to the final node.
        # Eps transitions are never needed: the combine step materialises
        # every shortcut they could provide.
        best: dict = {target: []}
        queue = deque([target])
        while queue:
            node = queue.popleft()
            if node == _FINAL:
                return best[node]
            for trans in self.out_by_src.get(node, ()):
                nxt = trans[2]
                if nxt not in best:
                    best[nxt] = best[node] + [trans]
                    queue.append(nxt)
        return None if _FINAL not in best else best[_FINAL]

    def _unwind(self, path: list[tuple]) -> list[PdaRule]:
        """Turn an accepting path into the rule sequence that produced it."""
        path = list(path)
        rules_rev: list[PdaRule] = []
        while True:
            record = self.rel[path[0]]
            if isinstance(record, _Init):
                break
            if isinstance(record, (_ViaNop, _ViaRewrite)):
                rules_rev.append(record.rule)
                path[0] = record.premise
            elif isinstance(record, _ViaCombine):
                pop_record = self.rel[record.eps]
                assert isinstance(pop_record, _ViaPop)
                rules_rev.append(pop_record.rule)
                path[0:1] = [pop_record.premise, record.cont]
            elif isinstance(record, _ViaPushHead):
                tail_record = self.rel[path[1]]
                assert isinstance(tail_record, _ViaPushTail)
                rules_rev.append(tail_record.rule)
                path[0:2] = [tail_record.premise]
            else:  # _ViaPushTail / _ViaPop cannot head an accepting path
                raise AssertionError(f"unexpected path head record {record!r}")
        return list(reversed(rules_rev))


def saturate(pda: Pda, max_transitions: Optional[int] = None) -> _Saturation:
    """post* of `pda`.  `max_transitions` bounds the work: saturations
    that would grow past it raise SearchBudgetExceeded instead of
    exhausting time or memory on pathological instances."""
    return _Saturation(pda, max_transitions)


def reachable_states(pda: Pda, max_transitions: Optional[int] = None) -> set:
    """Every control state visited by some computation from (init, empty)."""
    return saturate(pda, max_transitions).reachable()


def is_state_reachable(pda: Pda, target: Hashable) -> Verdict:
    if pda.states is not None and target not in pda.states:
        raise ModelError(f"target state {target!r} not declared")
    sat = saturate(pda)
    if target not in sat.reachable():
        return Unreachable()
    witness = sat.witness(target)
    assert witness is not None
    return Reachable(witness)
