"""Formulas of the trimodal language: AST, parser and printer.

Concrete syntax::

    formula := impl
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | ("K"|"S"|"H") "{" agents? "}" unary
             | "(" formula ")" | "false" | "true" | IDENT

``true`` is sugar for ``!false``.  Coalitions are written ``{a,b}``; ``{}`` is
the empty coalition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

Coalition = frozenset

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
KEYWORDS = frozenset({"false", "true"})


def coalition(members: Iterable[str] = ()) -> frozenset[str]:
    return frozenset(members)


def format_coalition(c: Iterable[str]) -> str:
    return "{" + ",".join(sorted(c)) + "}"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Know:
    coalition: frozenset[str]
    sub: "Formula"


@dataclass(frozen=True)
class Strat:
    coalition: frozenset[str]
    sub: "Formula"


@dataclass(frozen=True)
class Howto:
    coalition: frozenset[str]
    sub: "Formula"


Formula = Union[Var, Bot, Not, Implies, And, Or, Know, Strat, Howto]
Modal = (Know, Strat, Howto)
Binary = (Implies, And, Or)

TOP = Not(Bot())

_MODAL_LETTER = {Know: "K", Strat: "S", Howto: "H"}
_LETTER_MODAL = {v: k for k, v in _MODAL_LETTER.items()}


def children(f: Formula) -> tuple:
    if isinstance(f, (Var, Bot)):
        return ()
    if isinstance(f, Binary):
        return (f.left, f.right)
    return (f.sub,)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every subformula of ``f`` in post-order (children first)."""
    for c in children(f):
        yield from subformulas(c)
    yield f


def agents_of(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Modal):
            out |= g.coalition
    return frozenset(out)


def variables_of(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Var))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# --- printing -------------------------------------------------------------

_PREC_IMPL, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return _PREC_IMPL
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    return _PREC_UNARY


def _fmt(f: Formula, min_prec: int) -> str:
    if isinstance(f, Var):
        text = f.name
    elif isinstance(f, Bot):
        text = "false"
    elif f == TOP:
        text = "true"
    elif isinstance(f, Not):
        text = "!" + _fmt(f.sub, _PREC_UNARY)
    elif isinstance(f, Implies):
        # right-associative
        text = f"{_fmt(f.left, _PREC_OR)} -> {_fmt(f.right, _PREC_IMPL)}"
    elif isinstance(f, Or):
        text = f"{_fmt(f.left, _PREC_OR)} | {_fmt(f.right, _PREC_AND)}"
    elif isinstance(f, And):
        text = f"{_fmt(f.left, _PREC_AND)} & {_fmt(f.right, _PREC_UNARY)}"
    else:
        letter = _MODAL_LETTER[type(f)]
        text = f"{letter}{format_coalition(f.coalition)} {_fmt(f.sub, _PREC_UNARY)}"
    if _prec(f) < min_prec:
        return f"({text})"
    return text


def format_formula(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses that still parse back to ``f``."""
    return _fmt(f, _PREC_IMPL)


# --- parsing --------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, offset: int, expected: Iterable[str] = ()):
        self.text = text
        self.offset = offset
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.expected = tuple(sorted(set(expected)))
        self.reason = message
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {self.line}, column {self.column}: {message}{detail}")


@dataclass(frozen=True)
class _Tok:
    kind: str  # IDENT, MODAL, or the punctuation itself; EOF at end
    value: str
    pos: int


_PUNCT = ("->", "!", "&", "|", "(", ")", "{", "}", ",")


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            word = m.group()
            j = m.end()
            while j < n and text[j].isspace():
                j += 1
            if word in _LETTER_MODAL and j < n and text[j] == "{":
                toks.append(_Tok("MODAL", word, i))
            else:
                toks.append(_Tok("IDENT", word, i))
            i = m.end()
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(_Tok(p, p, i))
                i += len(p)
                break
        else:
            raise FormulaSyntaxError(f"unknown token {ch!r}", text, i)
    toks.append(_Tok("EOF", "", n))
    return toks


_UNARY_START = ("!", "(", "MODAL", "IDENT")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: Iterable[str]) -> FormulaSyntaxError:
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.value)
        return FormulaSyntaxError(f"unexpected {found}", self.text, t.pos, expected)

    def eat(self, kind: str) -> _Tok:
        t = self.tok
        if t.kind != kind:
            raise self.error([kind])
        self.i += 1
        return t

    def parse(self) -> Formula:
        f = self.impl()
        if self.tok.kind != "EOF":
            raise self.error(["->", "|", "&", "end of input"])
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.tok.kind == "->":
            self.i += 1
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.kind == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.tok.kind == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "!":
            self.i += 1
            return Not(self.unary())
        if t.kind == "MODAL":
            self.i += 1
            c = self.coalition()
            return _LETTER_MODAL[t.value](c, self.unary())
        if t.kind == "(":
            self.i += 1
            f = self.impl()
            if self.tok.kind != ")":
                raise self.error([")", "->", "|", "&"])
            self.i += 1
            return f
        if t.kind == "IDENT":
            self.i += 1
            if t.value == "false":
                return Bot()
            if t.value == "true":
                return TOP
            return Var(t.value)
        raise self.error(_UNARY_START)

    def coalition(self) -> frozenset[str]:
        open_tok = self.eat("{")
        members: list[str] = []
        if self.tok.kind == "}":
            self.i += 1
            return frozenset()
        while True:
            t = self.tok
            if t.kind != "IDENT" or t.value in KEYWORDS:
                if t.kind in ("EOF", ")"):
                    raise FormulaSyntaxError(
                        "unbalanced braces in coalition literal", self.text, open_tok.pos, ["}"]
                    )
                raise self.error(["agent name"])
            if t.value in members:
                raise FormulaSyntaxError(f"duplicate agent {t.value!r} in coalition", self.text, t.pos)
            members.append(t.value)
            self.i += 1
            if self.tok.kind == ",":
                self.i += 1
                continue
            if self.tok.kind == "}":
                self.i += 1
                return frozenset(members)
            if self.tok.kind in ("EOF", ")"):
                raise FormulaSyntaxError(
                    "unbalanced braces in coalition literal", self.text, open_tok.pos, ["}"]
                )
            raise self.error([",", "}"])


def parse_formula(text: str) -> Formula:
    """Parse concrete syntax into a :data:`Formula`.

    Raises :class:`FormulaSyntaxError` carrying ``line``, ``column`` and the set
    of ``expected`` tokens.
    """
    return _Parser(text).parse()


def parse_coalition(text: str) -> frozenset[str]:
    p = _Parser(text)
    c = p.coalition()
    if p.tok.kind != "EOF":
        raise p.error(["end of input"])
    return c
