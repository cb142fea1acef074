"""Recursive-descent parser for the formula language.

    path   := pterm ("|" pterm)*
    pterm  := pfac ("&" pfac)*
    pfac   := "!" pfac | "(" path ")" | "F" ivl state | "G" ivl state | chain
    chain  := state ("U" ivl state)*
    state  := sterm (("|" | "->") sterm)*
    sterm  := sfac ("&" sfac)*
    sfac   := "!" sfac | "(" state ")" | "true" | "false" | atom
    atom   := "P[" nat "]" "in" ivl
    ivl    := ("[" | "(") rat "," rat ("]" | ")")

State and path connectives share symbols.  A state formula is always read as
far as it goes: a binary state operator whose right operand does not parse as
a state formula ends the state formula there, and the parser backtracks to
the path level.  ``U`` is right-associative and binds looser than any state
connective, so ``a & b U[0,1] c`` is ``(a & b) U[0,1] c``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..ctmc import Atom, ModelError, ProbInterval
from .ast import (SAnd, SAtom, SNot, STrue, StateQuery, TimeWindow, UntilChain,
                  eventually, globally, p_or, pand, pnot, s_false, s_implies, s_or)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.message = message
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")

    def pointer(self) -> str:
        """The offending line with a caret under the error position."""
        return f"{self.text}\n{' ' * self.pos}^"


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?|-?\.\d+)
  | (?P<arrow>->)
  | (?P<word>[A-Za-z_][A-Za-z_0-9]*|∞)
  | (?P<sym>[!&|()\[\],])
""", re.VERBOSE)

_UNBOUNDED = {"inf", "infinity", "oo", "∞"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.furthest: ParseError | None = None

    # token helpers -------------------------------------------------------------
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str, k: int = 0) -> bool:
        return self.peek(k)[1] == value

    def error(self, message: str, pos: int | None = None) -> ParseError:
        if pos is None:
            pos = self.peek()[2]
        err = ParseError(message, pos, self.text)
        if self.furthest is None or err.pos >= self.furthest.pos:
            self.furthest = err
        return err

    def expect(self, value: str, what: str | None = None):
        tok = self.peek()
        if tok[1] != value:
            found = tok[1] or "end of input"
            raise self.error(f"expected {what or repr(value)}, found {found!r}")
        self.i += 1
        return tok

    # numbers and intervals -------------------------------------------------------
    def rational(self) -> Fraction:
        kind, val, pos = self.peek()
        if kind == "word" and val.lower() in _UNBOUNDED or val == "∞":
            raise self.error("unbounded intervals are not supported", pos)
        if kind != "num":
            raise self.error(f"expected a rational number, found {val or 'end of input'!r}", pos)
        self.i += 1
        return Fraction(val)

    def interval(self):
        kind, val, pos = self.peek()
        if val not in ("[", "("):
            raise self.error(f"expected '[' or '(' to open an interval, found {val or 'end of input'!r}", pos)
        self.i += 1
        lo = self.rational()
        self.expect(",", "','")
        hi = self.rational()
        close = self.peek()
        if close[1] not in ("]", ")"):
            raise self.error(f"expected ']' or ')' to close an interval, found {close[1] or 'end of input'!r}")
        self.i += 1
        return lo, hi, val == "[", close[1] == "]", pos

    def window(self) -> TimeWindow:
        lo, hi, lc, hc, pos = self.interval()
        try:
            return TimeWindow(lo, hi, lc, hc)
        except ValueError as e:
            raise self.error(str(e), pos)

    # state formulas ---------------------------------------------------------------
    def state(self):
        left = self.sterm()
        while self.at("|") or self.at("->"):
            save = self.i
            op = self.peek()[1]
            self.i += 1
            try:
                right = self.sterm()
            except ParseError:
                self.i = save
                break
            left = s_or(left, right) if op == "|" else s_implies(left, right)
        return left

    def sterm(self):
        left = self.sfac()
        while self.at("&"):
            save = self.i
            self.i += 1
            try:
                right = self.sfac()
            except ParseError:
                self.i = save
                break
            left = SAnd(left, right)
        return left

    def sfac(self):
        kind, val, pos = self.peek()
        if val == "!":
            self.i += 1
            return SNot(self.sfac())
        if val == "(":
            self.i += 1
            inner = self.state()
            self.expect(")", "')'")
            return inner
        if val == "true":
            self.i += 1
            return STrue()
        if val == "false":
            self.i += 1
            return s_false()
        if val == "P":
            return self.atom()
        raise self.error(f"expected a state formula, found {val or 'end of input'!r}", pos)

    def atom(self):
        self.expect("P")
        self.expect("[", "'[' after P")
        kind, val, pos = self.peek()
        if kind != "num" or not val.isdigit() or int(val) < 1:
            raise self.error(f"expected a state index (positive integer), found {val or 'end of input'!r}", pos)
        self.i += 1
        self.expect("]", "']' after the state index")
        self.expect("in", "'in'")
        lo, hi, lc, hc, ipos = self.interval()
        try:
            iv = ProbInterval(lo, hi, lc, hc)
        except ModelError as e:
            raise self.error(e.diagnostics[0], ipos)
        return SAtom(Atom(int(val), iv))

    # path formulas ----------------------------------------------------------------
    def path(self):
        left = self.pterm()
        while self.at("|"):
            self.i += 1
            left = p_or(left, self.pterm())
        return left

    def pterm(self):
        left = self.pfac()
        while self.at("&"):
            self.i += 1
            left = pand(left, self.pfac())
        return left

    def pfac(self):
        kind, val, pos = self.peek()
        if val in ("F", "G") and self.peek(1)[1] in ("[", "("):
            self.i += 1
            w = self.window()
            phi = self.state()
            return eventually(w, phi) if val == "F" else globally(w, phi)
        save = self.i
        try:
            return self.chain()
        except ParseError:
            self.i = save
        if val == "!":
            self.i += 1
            return pnot(self.pfac())
        if val == "(":
            self.i += 1
            inner = self.path()
            self.expect(")", "')'")
            return inner
        raise self.furthest or self.error("expected a formula")

    def chain(self):
        first = self.state()
        steps = []
        while self.at("U"):
            self.i += 1
            w = self.window()
            steps.append((w, self.state()))
        if not steps:
            return StateQuery(first)
        # right-associative nesting flattens into one chain
        return UntilChain(first, tuple(steps))

    def parse(self):
        result = self.path()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise self.error(f"unexpected {val!r}", pos)
        return result


def parse(text: str):
    """Parse a path formula (a state formula is accepted as a query at time 0)."""
    return Parser(text).parse()


def parse_state(text: str):
    p = Parser(text)
    phi = p.state()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise p.error(f"unexpected {val!r}", pos)
    return phi
