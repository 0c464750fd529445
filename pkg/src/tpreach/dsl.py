"""Line-oriented description language for the two automaton models.

    tpda                      # or: pda
    states s1 s2;
    init s1;
    clocks x y;               # tpda only
    alphabet a b;
    rule s1 -> s2 : push(a, [1:3));
    rule s2 -> s2 : nop;

Intervals are [n:m], [n:m), (n:m], (n:m) with `inf` allowed as an open
upper bound.  `pda` models use bare push(a) / pop(a) / nop.  `#` starts
a comment; every statement sits on its own line and ends with `;`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import pushdown, tpda
from .tpda import Interval, Tpda


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


_TOKEN_RE = re.compile(r"->|[A-Za-z_][A-Za-z0-9_]*|\d+|[;:,()\[\]]|\S")


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    text = text.split("#", 1)[0]
    return [_Token(m.group(), line_no, m.start() + 1)
            for m in _TOKEN_RE.finditer(text)]


class _Cursor:
    def __init__(self, tokens: list[_Token], line_no: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line_no

    def peek(self) -> Union[_Token, None]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, what: str = "token") -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            col = last.col + len(last.text) if last else 1
            raise ParseError(self.line, col, f"expected {what}, line ended")
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take(repr(text))
        if tok.text != text:
            raise ParseError(tok.line, tok.col,
                             f"expected {text!r}, found {tok.text!r}")
        return tok

    def name(self, what: str = "a name") -> _Token:
        tok = self.take(what)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok.text):
            raise ParseError(tok.line, tok.col,
                             f"expected {what}, found {tok.text!r}")
        return tok

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ParseError(tok.line, tok.col,
                             f"unexpected {tok.text!r} after statement")


def _parse_interval(cur: _Cursor) -> Interval:
    open_tok = cur.take("'[' or '('")
    if open_tok.text not in "[(":
        raise ParseError(open_tok.line, open_tok.col,
                         f"expected '[' or '(', found {open_tok.text!r}")
    lo_tok = cur.take("a natural number")
    if not lo_tok.text.isdigit():
        raise ParseError(lo_tok.line, lo_tok.col,
                         f"expected a natural number, found {lo_tok.text!r}")
    cur.expect(":")
    hi_tok = cur.take("a natural number or 'inf'")
    if hi_tok.text == "inf":
        hi = None
    elif hi_tok.text.isdigit():
        hi = int(hi_tok.text)
    else:
        raise ParseError(hi_tok.line, hi_tok.col,
                         f"expected a natural number or 'inf', found {hi_tok.text!r}")
    close_tok = cur.take("']' or ')'")
    if close_tok.text not in "])":
        raise ParseError(close_tok.line, close_tok.col,
                         f"expected ']' or ')', found {close_tok.text!r}")
    if hi is None and close_tok.text == "]":
        raise ParseError(close_tok.line, close_tok.col,
                         "an unbounded interval cannot be closed above")
    return Interval(int(lo_tok.text), open_tok.text == "[", hi,
                    close_tok.text == "]")


def _parse_op(cur: _Cursor, timed: bool):
    kw = cur.name("an operation")
    if kw.text == "nop":
        return tpda.NopOp() if timed else pushdown.Nop(), kw
    if kw.text in ("test", "reset") and not timed:
        raise ParseError(kw.line, kw.col, f"{kw.text!r} needs a tpda model")
    if kw.text not in ("test", "reset", "push", "pop"):
        raise ParseError(kw.line, kw.col, f"unknown operation {kw.text!r}")
    cur.expect("(")
    arg = cur.name("a clock or symbol name")
    if timed:
        cur.expect(",")
        iv = _parse_interval(cur)
        cur.expect(")")
        ctor = {"test": tpda.TestOp, "reset": tpda.ResetOp,
                "push": tpda.PushOp, "pop": tpda.PopOp}[kw.text]
        return ctor(arg.text, iv), arg
    cur.expect(")")
    ctor = {"push": pushdown.Push, "pop": pushdown.Pop}[kw.text]
    return ctor(arg.text), arg


def parse_model(text: str) -> Union[Tpda, pushdown.Pda]:
    lines = text.split("\n")
    statements = []
    header = None
    for i, raw in enumerate(lines, start=1):
        tokens = _tokenize_line(raw, i)
        if not tokens:
            continue
        if header is None:
            cur = _Cursor(tokens, i)
            tok = cur.take("'tpda' or 'pda'")
            if tok.text not in ("tpda", "pda"):
                raise ParseError(tok.line, tok.col,
                                 f"expected 'tpda' or 'pda', found {tok.text!r}")
            cur.done()
            header = tok.text
            continue
        if tokens[-1].text != ";":
            last = tokens[-1]
            raise ParseError(last.line, last.col + len(last.text),
                             "statement must end with ';'")
        statements.append(_Cursor(tokens[:-1], i))
    if header is None:
        raise ParseError(1, 1, "empty model: expected 'tpda' or 'pda' header")
    timed = header == "tpda"

    states: list[_Token] = []
    init: Union[_Token, None] = None
    clocks: list[_Token] = []
    alphabet: list[_Token] = []
    rules = []  # (src_tok, op, op_name_tok, dst_tok)
    for cur in statements:
        kw = cur.name("a statement keyword")
        if kw.text == "states":
            while cur.peek() is not None:
                states.append(cur.name("a state name"))
        elif kw.text == "init":
            init = cur.name("a state name")
            cur.done()
        elif kw.text == "clocks":
            if not timed:
                raise ParseError(kw.line, kw.col, "'clocks' needs a tpda model")
            while cur.peek() is not None:
                clocks.append(cur.name("a clock name"))
        elif kw.text == "alphabet":
            while cur.peek() is not None:
                alphabet.append(cur.name("a symbol name"))
        elif kw.text == "rule":
            src = cur.name("a state name")
            cur.expect("->")
            dst = cur.name("a state name")
            cur.expect(":")
            op, name_tok = _parse_op(cur, timed)
            cur.done()
            rules.append((src, op, name_tok, dst))
        else:
            raise ParseError(kw.line, kw.col, f"unknown statement {kw.text!r}")

    state_names = {t.text for t in states}
    clock_names = {t.text for t in clocks}
    symbol_names = {t.text for t in alphabet}
    if init is None:
        raise ParseError(1, 1, "missing 'init' statement")
    if init.text not in state_names:
        raise ParseError(init.line, init.col, f"undeclared state {init.text!r}")
    for src, op, name_tok, dst in rules:
        for tok in (src, dst):
            if tok.text not in state_names:
                raise ParseError(tok.line, tok.col,
                                 f"undeclared state {tok.text!r}")
        if isinstance(op, (tpda.TestOp, tpda.ResetOp)):
            if op.clock not in clock_names:
                raise ParseError(name_tok.line, name_tok.col,
                                 f"undeclared clock {op.clock!r}")
        if isinstance(op, (tpda.PushOp, tpda.PopOp, pushdown.Push, pushdown.Pop)):
            if op.symbol not in symbol_names:
                raise ParseError(name_tok.line, name_tok.col,
                                 f"undeclared symbol {op.symbol!r}")

    if timed:
        return Tpda(states=frozenset(state_names), init=init.text,
                    clocks=frozenset(clock_names),
                    alphabet=frozenset(symbol_names),
                    rules=tuple(tpda.TpdaRule(s.text, op, d.text)
                                for s, op, _n, d in rules))
    return pushdown.Pda(init=init.text, states=frozenset(state_names),
                        alphabet=frozenset(symbol_names),
                        rules=tuple(pushdown.PdaRule(s.text, op, d.text)
                                    for s, op, _n, d in rules))


def _render_op(op) -> str:
    if isinstance(op, (tpda.NopOp, pushdown.Nop)):
        return "nop"
    if isinstance(op, tpda.TestOp):
        return f"test({op.clock}, {op.interval.render()})"
    if isinstance(op, tpda.ResetOp):
        return f"reset({op.clock}, {op.interval.render()})"
    if isinstance(op, tpda.PushOp):
        return f"push({op.symbol}, {op.interval.render()})"
    if isinstance(op, tpda.PopOp):
        return f"pop({op.symbol}, {op.interval.render()})"
    if isinstance(op, pushdown.Push):
        return f"push({op.symbol})"
    if isinstance(op, pushdown.Pop):
        return f"pop({op.symbol})"
    raise TypeError(f"not a rule operation: {op!r}")


def render_model(model: Union[Tpda, pushdown.Pda]) -> str:
    """Canonical text for a model; parse_model inverts it."""
    timed = isinstance(model, Tpda)
    lines = ["tpda" if timed else "pda"]
    lines.append("states " + " ".join(sorted(model.states)) + ";")
    lines.append(f"init {model.init};")
    if timed and model.clocks:
        lines.append("clocks " + " ".join(sorted(model.clocks)) + ";")
    if model.alphabet:
        lines.append("alphabet " + " ".join(sorted(model.alphabet)) + ";")
    for rule in model.rules:
        lines.append(f"rule {rule.src} -> {rule.dst} : {_render_op(rule.op)};")
    return "\n".join(lines) + "\n"
