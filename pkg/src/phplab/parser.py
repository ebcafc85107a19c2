"""Text syntax for formulas.

Grammar (whitespace insensitive between tokens)::

    formula := disj
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "!" unary | "A" var "<=" int "." unary | "E" var "<=" int "." unary
             | "R(" term "," term ")" | "(" formula ")"
    term    := int | var

``!R(a,b)`` with the atom written directly after the bang reads as a negated
literal; ``!(R(a,b))`` keeps an explicit negation node.  The printer emits the
same distinction, so ``parse(to_text(f)) == f`` for every formula.  ``A``,
``E`` and ``R`` are reserved and must be followed by a non-identifier
character (``E u <= 1 . R(u,0)``, not ``Eu<=1...``).
"""
from __future__ import annotations

import re
from typing import Iterable

from .errors import FormulaSyntaxError, UnboundVariableError
from .formula import And, Atom, ExistsLe, ForallLe, Formula, NegAtom, Not, Or

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<le><=)|(?P<sym>[()!&|.,])"
)
KEYWORDS = {"A", "E", "R"}


def tokenize(text: str) -> list[tuple[str, str, int, int]]:
    """Split ``text`` into ``(kind, value, line, column)`` tokens, 1-based positions."""
    tokens = []
    i, line, col = 0, 1, 1
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind != "ws":
            if kind == "ident" and value in KEYWORDS:
                kind = value
            tokens.append((kind, value, line, col))
        for ch in value:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, free: Iterable[str]):
        self.tokens = tokenize(text)
        self.i = 0
        self.scope: list[str] = list(free)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {want!r}, found {got!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def at(self, kind, value=None) -> bool:
        tok = self.tokens[self.i]
        return tok[0] == kind and (value is None or tok[1] == value)

    def formula(self) -> Formula:
        return self.disj()

    def disj(self) -> Formula:
        out = self.conj()
        while self.at("sym", "|"):
            tok = self.take("sym", "|")
            out = Or(out, self.conj(), (tok[2], tok[3]))
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.at("sym", "&"):
            tok = self.take("sym", "&")
            out = And(out, self.unary(), (tok[2], tok[3]))
        return out

    def unary(self) -> Formula:
        kind, value, line, col = self.peek()
        pos = (line, col)
        if kind == "sym" and value == "!":
            self.take("sym", "!")
            if self.at("R"):
                p, h, _ = self.atom()
                return NegAtom(p, h, pos)
            return Not(self.unary(), pos)
        if kind in ("A", "E"):
            self.take(kind)
            var = self.take("ident")[1]
            self.take("le")
            bound = int(self.take("int")[1])
            self.take("sym", ".")
            self.scope.append(var)
            try:
                body = self.unary()
            finally:
                self.scope.pop()
            cls = ForallLe if kind == "A" else ExistsLe
            return cls(var, bound, body, pos)
        if kind == "R":
            p, h, pos = self.atom()
            return Atom(p, h, pos)
        if kind == "sym" and value == "(":
            self.take("sym", "(")
            inner = self.formula()
            self.take("sym", ")")
            return inner
        raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", line, col)

    def atom(self):
        tok = self.take("R")
        self.take("sym", "(")
        p = self.term()
        self.take("sym", ",")
        h = self.term()
        self.take("sym", ")")
        return p, h, (tok[2], tok[3])

    def term(self):
        kind, value, line, col = self.peek()
        if kind == "int":
            self.i += 1
            return int(value)
        if kind == "ident":
            self.i += 1
            if value not in self.scope:
                raise UnboundVariableError(f"unbound variable {value!r}", line, col)
            return value
        raise FormulaSyntaxError(f"expected a term, found {value or 'end of input'!r}", line, col)


def parse(text: str, free: Iterable[str] = ()) -> Formula:
    """Parse ``text``; variables listed in ``free`` may occur unbound."""
    p = _Parser(text, free)
    f = p.formula()
    p.take("eof")
    return f


def _term(t) -> str:
    return str(t)


def to_text(f: Formula) -> str:
    """Canonical text form; ``parse(to_text(f)) == f``."""
    if isinstance(f, Atom):
        return f"R({_term(f.pigeon)},{_term(f.hole)})"
    if isinstance(f, NegAtom):
        return f"!R({_term(f.pigeon)},{_term(f.hole)})"
    if isinstance(f, Not):
        body = f.body
        if isinstance(body, (Atom, And, Or)):
            return f"!({to_text(body)})"
        return "!" + to_text(body)
    if isinstance(f, (ForallLe, ExistsLe)):
        q = "A" if isinstance(f, ForallLe) else "E"
        body = to_text(f.body)
        if isinstance(f.body, (And, Or)):
            body = f"({body})"
        return f"{q} {f.var} <= {f.bound} . {body}"
    if isinstance(f, And):
        left = to_text(f.left)
        if isinstance(f.left, Or):
            left = f"({left})"
        right = to_text(f.right)
        if isinstance(f.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(f, Or):
        right = to_text(f.right)
        if isinstance(f.right, Or):
            right = f"({right})"
        return f"{to_text(f.left)} | {right}"
    raise TypeError(f"not a formula: {f!r}")
