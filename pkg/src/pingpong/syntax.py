"""Text syntax for words with coefficients.

Grammar (juxtaposition is the product)::

    word    := factor*
    factor  := atom ('^' INT)?
    atom    := VAR | NAME | '1' | '(' word ')' | '[' word ',' word ']'

``VAR`` is ``x1``, ``x2``, ...; ``NAME`` is an identifier bound to a group
constant; ``[a, b]`` is the commutator ``a b a^-1 b^-1``. Error positions are
1-based character offsets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import WordSyntaxError
from .groups import Element
from .words import FreeWord, Var

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<var>x(?P<idx>\d+)(?![A-Za-z0-9_]))
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[\^\(\)\[\],])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int  # 1-based


def tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise WordSyntaxError(f"unexpected character {text[i]!r}", i + 1)
        kind = m.lastgroup
        if kind == "idx":
            kind = "var"
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), i + 1))
        i = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, constants: Mapping[str, Element] | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.constants = constants

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def end_pos(self) -> int:
        return len(self.text) + 1

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def word(self, closers: tuple[str, ...]) -> list:
        parts: list = []
        while True:
            t = self.peek()
            if t is None or (t.kind == "op" and t.text in closers):
                return parts
            parts.extend(self.factor())

    def factor(self) -> list:
        base = self.atom()
        t = self.peek()
        if t is not None and t.kind == "op" and t.text == "^":
            self.take()
            e = self.peek()
            if e is None:
                raise WordSyntaxError("missing exponent after '^'", self.end_pos())
            if e.kind != "int":
                raise WordSyntaxError(f"exponent must be an integer, got {e.text!r}", e.pos)
            self.take()
            k = int(e.text)
            if k < 0:
                base = [p.inverse() for p in reversed(base)]
                k = -k
            return base * k
        return base

    def atom(self) -> list:
        t = self.peek()
        if t is None:
            raise WordSyntaxError("unexpected end of input", self.end_pos())
        if t.kind == "var":
            self.take()
            idx = int(t.text[1:])
            if idx < 1:
                raise WordSyntaxError("variable indices start at x1", t.pos)
            return [Var(idx, 1)]
        if t.kind == "int":
            self.take()
            if t.text != "1":
                raise WordSyntaxError(f"unexpected number {t.text!r}", t.pos)
            return []
        if t.kind == "name":
            self.take()
            if self.constants is None or t.text not in self.constants:
                raise WordSyntaxError(f"unknown constant {t.text!r}", t.pos)
            return [self.constants[t.text]]
        if t.text == "(":
            self.take()
            inner = self.word((")",))
            close = self.peek()
            if close is None or close.text != ")":
                raise WordSyntaxError("unbalanced '('", t.pos)
            self.take()
            return inner
        if t.text == "[":
            self.take()
            a = self.word((",", "]"))
            sep = self.peek()
            if sep is None:
                raise WordSyntaxError("unbalanced '['", t.pos)
            if sep.text != ",":
                raise WordSyntaxError("commutator needs two entries separated by ','", sep.pos)
            self.take()
            b = self.word(("]", ","))
            close = self.peek()
            if close is None:
                raise WordSyntaxError("unbalanced '['", t.pos)
            if close.text != "]":
                raise WordSyntaxError(f"unexpected {close.text!r} in commutator", close.pos)
            self.take()
            inv = lambda ps: [p.inverse() for p in reversed(ps)]  # noqa: E731
            return a + b + inv(a) + inv(b)
        if t.text in (")", "]"):
            raise WordSyntaxError(f"unbalanced {t.text!r}", t.pos)
        raise WordSyntaxError(f"unexpected {t.text!r}", t.pos)

    def parse(self) -> list:
        parts = self.word(())
        return parts


def _check_trailing(p: _Parser):
    t = p.peek()
    if t is not None:
        raise WordSyntaxError(f"unbalanced {t.text!r}", t.pos)


def parse_word(text: str, constants: Mapping[str, Element] | None = None) -> list:
    """Parse into a raw (unreduced) list of parts."""
    p = _Parser(text, constants)
    parts = p.word(())
    _check_trailing(p)
    return parts


def parse_free_word(text: str) -> FreeWord:
    parts = parse_word(text, None)
    return FreeWord(tuple((v.index, v.sign) for v in parts))
