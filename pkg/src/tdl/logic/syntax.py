"""Formulas and sequents of the tense language, with a parser and printer.

Grammar (whitespace-insensitive)::

    formula := impl
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := ("G" | "H" | "F" | "P" | "~") unary | atom
    atom    := "top" | "bot" | ident | "(" formula ")"

``->`` and ``~`` depend on the calculus: both are rejected under ``lt``;
under ``ltc``/``lti`` ``~`` is negation; under ``ltdm`` it is the De Morgan
involution, ``->`` is rejected and F, P are rewritten as ~G~ and ~H~.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from ..errors import FormulaSyntaxError

CALCULI = ("lt", "ltc", "lti", "ltdm")
MODALS = ("G", "H", "F", "P")
DUAL = {"G": "F", "H": "P", "F": "G", "P": "H"}


@dataclass(frozen=True)
class Formula:
    op: str
    args: tuple["Formula", ...] = ()
    name: str | None = None

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Formula({render(self)!r})"

    def variables(self) -> set[str]:
        if self.op == "var":
            return {self.name}
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def depth(self) -> int:
        return 1 + max((a.depth() for a in self.args), default=-1)

    def subformulas(self) -> Iterator["Formula"]:
        yield self
        for a in self.args:
            yield from a.subformulas()


def Var(name: str) -> Formula:
    return Formula("var", (), name)


TOP = Formula("top")
BOT = Formula("bot")


def And(a: Formula, b: Formula) -> Formula:
    return Formula("and", (a, b))


def Or(a: Formula, b: Formula) -> Formula:
    return Formula("or", (a, b))


def Imp(a: Formula, b: Formula) -> Formula:
    return Formula("imp", (a, b))


def Neg(a: Formula) -> Formula:
    return Formula("neg", (a,))


def Tilde(a: Formula) -> Formula:
    return Formula("tilde", (a,))


def Modal(op: str, a: Formula) -> Formula:
    return Formula(op, (a,))


def G(a): return Modal("G", a)
def H(a): return Modal("H", a)
def F(a): return Modal("F", a)
def P(a): return Modal("P", a)


def big_and(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def big_or(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# ------------------------------------------------------------ modal helpers
# Under ltdm the diamonds are abbreviations, so rule matching goes through
# these helpers instead of inspecting ``op`` directly.

def mk_modal(op: str, a: Formula, calc: str = "lt") -> Formula:
    if calc == "ltdm" and op in ("F", "P"):
        return Tilde(Modal(DUAL[op], Tilde(a)))
    return Modal(op, a)


def as_modal(op: str, f: Formula, calc: str = "lt") -> Formula | None:
    """The body α when ``f`` is op α (in the calculus' own encoding), else None."""
    if calc == "ltdm" and op in ("F", "P"):
        box = DUAL[op]
        if f.op == "tilde" and f.args[0].op == box and f.args[0].args[0].op == "tilde":
            return f.args[0].args[0].args[0]
        return None
    return f.args[0] if f.op == op else None


# ------------------------------------------------------------------ sequents

@dataclass(frozen=True)
class Sequent:
    left: frozenset[Formula]
    right: frozenset[Formula]

    @staticmethod
    def of(left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        return Sequent(frozenset(left), frozenset(right))

    def variables(self) -> set[str]:
        out: set[str] = set()
        for f in self.left | self.right:
            out |= f.variables()
        return out

    def __str__(self) -> str:
        return render_sequent(self)

    def __repr__(self) -> str:
        return f"Sequent({render_sequent(self)!r})"


# -------------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(=>)|(->)|([&|(),~])|([GHFP])|([a-z][a-zA-Z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            out.append(("=>", "=>", start))
        elif m.group(2):
            out.append(("->", "->", start))
        elif m.group(3):
            out.append((m.group(3), m.group(3), start))
        elif m.group(4):
            out.append(("modal", m.group(4), start))
        else:
            word = m.group(5)
            kind = word if word in ("top", "bot") else "ident"
            out.append((kind, word, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, calc: str):
        if calc not in CALCULI:
            raise ValueError(f"unknown calculus {calc!r}")
        self.text = text
        self.calc = calc
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            self.fail(f"expected {kind!r}")
        self.i += 1
        return tok

    def fail(self, message: str):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"{message}, found {found}", pos, self.text)

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "->":
            if self.calc not in ("ltc", "lti"):
                self.fail(f"implication is not available in {self.calc}")
            self.i += 1
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.peek()[0] == "|":
            self.i += 1
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.peek()[0] == "&":
            self.i += 1
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "modal":
            self.i += 1
            return mk_modal(value, self.unary(), self.calc)
        if kind == "~":
            if self.calc == "lt":
                self.fail("negation is not available in lt")
            self.i += 1
            body = self.unary()
            return Tilde(body) if self.calc == "ltdm" else Neg(body)
        return self.atom()

    def atom(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "top":
            self.i += 1
            return TOP
        if kind == "bot":
            self.i += 1
            return BOT
        if kind == "ident":
            self.i += 1
            return Var(value)
        if kind == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        self.fail("expected a formula")

    def formula_list(self, stop: str) -> list[Formula]:
        if self.peek()[0] == stop:
            return []
        out = [self.formula()]
        while self.peek()[0] == ",":
            self.i += 1
            out.append(self.formula())
        return out


def parse_formula(text: str, calc: str = "lt") -> Formula:
    p = _Parser(text, calc)
    f = p.formula()
    if p.peek()[0] != "end":
        p.fail("unexpected trailing input")
    return f


def parse_sequent(text: str, calc: str = "lt") -> Sequent:
    p = _Parser(text, calc)
    left = p.formula_list("=>")
    p.take("=>")
    right = p.formula_list("end")
    if p.peek()[0] != "end":
        p.fail("unexpected trailing input")
    return Sequent.of(left, right)


# ------------------------------------------------------------------- printer

_PREC = {"imp": 1, "or": 2, "and": 3}


def render(f: Formula) -> str:
    op = f.op
    if op == "var":
        return f.name
    if op in ("top", "bot"):
        return op
    if op in MODALS:
        return f"{op} {_wrap(f.args[0], 4)}"
    if op in ("neg", "tilde"):
        return "~" + _wrap(f.args[0], 4)
    prec = _PREC[op]
    a, b = f.args
    symbol = {"and": " & ", "or": " | ", "imp": " -> "}[op]
    if op == "imp":
        # right associative
        return _wrap(a, prec + 1) + symbol + _wrap(b, prec)
    return _wrap(a, prec) + symbol + _wrap(b, prec + 1)


def _wrap(f: Formula, min_prec: int) -> str:
    prec = _PREC.get(f.op, 4)
    text = render(f)
    return f"({text})" if prec < min_prec else text


def render_sequent(s: Sequent) -> str:
    left = ", ".join(sorted(render(f) for f in s.left))
    right = ", ".join(sorted(render(f) for f in s.right))
    return f"{left} => {right}".strip()
