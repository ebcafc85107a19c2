"""Bounded relational formulas over the atom ``R(pigeon, hole)``.

Terms are non-negative integer constants or variable names; every quantifier
carries an explicit inclusive integer bound (``E u <= 3 . ...``).  Source
positions recorded by the parser are kept out of equality and hashing, so
structurally equal formulas compare equal and can key memo tables.

Shape classes, from most to least specific:

``atomic``
    a single ``R(a,b)`` or ``!R(a,b)``.
``sharply-bounded``
    every existential quantifier sits inside the scope of a universal one;
    bounded universals are always read as sharply bounded.
``existential-prefix``
    a block of leading existential quantifiers over a sharply-bounded matrix.
``general``
    anything else, e.g. an existential under a negation or a connective.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import BudgetExceeded, NegativeBoundError

Term = Union[int, str]


def _pos():
    return field(default=None, compare=False, repr=False)


def _check_term(t):
    if isinstance(t, bool) or not isinstance(t, (int, str)):
        raise TypeError(f"term must be an int or a variable name, got {t!r}")
    if isinstance(t, int) and t < 0:
        raise NegativeBoundError(f"negative constant {t}")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self):
        from .parser import to_text

        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    pigeon: Term
    hole: Term
    pos: tuple[int, int] | None = _pos()

    def __post_init__(self):
        _check_term(self.pigeon)
        _check_term(self.hole)


@dataclass(frozen=True)
class NegAtom(Formula):
    pigeon: Term
    hole: Term
    pos: tuple[int, int] | None = _pos()

    def __post_init__(self):
        _check_term(self.pigeon)
        _check_term(self.hole)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class ForallLe(Formula):
    var: str
    bound: int
    body: Formula
    pos: tuple[int, int] | None = _pos()

    def __post_init__(self):
        if self.bound < 0:
            raise NegativeBoundError(f"negative quantifier bound {self.bound}")


@dataclass(frozen=True)
class ExistsLe(Formula):
    var: str
    bound: int
    body: Formula
    pos: tuple[int, int] | None = _pos()

    def __post_init__(self):
        if self.bound < 0:
            raise NegativeBoundError(f"negative quantifier bound {self.bound}")


ATOMS = (Atom, NegAtom)
BINARY = (And, Or)
QUANTIFIERS = (ForallLe, ExistsLe)


class Shape(enum.IntEnum):
    ATOMIC = 0
    SHARPLY_BOUNDED = 1
    EXISTENTIAL_PREFIX = 2
    GENERAL = 3

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, ATOMS):
        return frozenset(t for t in (f.pigeon, f.hole) if isinstance(t, str))
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    return free_vars(f.body) - {f.var}


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def substitute(f: Formula, var: str, value: int) -> Formula:
    """Replace the free occurrences of ``var`` by the integer ``value``."""
    if isinstance(f, ATOMS):
        p = value if f.pigeon == var else f.pigeon
        h = value if f.hole == var else f.hole
        return type(f)(p, h, f.pos)
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, var, value), substitute(f.right, var, value), f.pos)
    if isinstance(f, Not):
        return Not(substitute(f.body, var, value), f.pos)
    if f.var == var:
        return f
    return type(f)(f.var, f.bound, substitute(f.body, var, value), f.pos)


def instantiate(f: Formula, **values: int) -> Formula:
    for var, value in values.items():
        f = substitute(f, var, value)
    return f


def is_sharply_bounded(f: Formula) -> bool:
    """No existential quantifier outside the scope of a universal one."""

    def ok(g: Formula, under_forall: bool) -> bool:
        if isinstance(g, ATOMS):
            return True
        if isinstance(g, BINARY):
            return ok(g.left, under_forall) and ok(g.right, under_forall)
        if isinstance(g, Not):
            return ok(g.body, under_forall)
        if isinstance(g, ExistsLe) and not under_forall:
            return False
        return ok(g.body, under_forall or isinstance(g, ForallLe))

    return ok(f, False)


def existential_prefix(f: Formula) -> tuple[list[tuple[str, int]], Formula]:
    """Split off the leading block of existential quantifiers."""
    prefix = []
    while isinstance(f, ExistsLe):
        prefix.append((f.var, f.bound))
        f = f.body
    return prefix, f


def classify(f: Formula) -> Shape:
    if isinstance(f, ATOMS):
        return Shape.ATOMIC
    if is_sharply_bounded(f):
        return Shape.SHARPLY_BOUNDED
    _, matrix = existential_prefix(f)
    if is_sharply_bounded(matrix):
        return Shape.EXISTENTIAL_PREFIX
    return Shape.GENERAL


def negate(f: Formula) -> Formula:
    """Negation pushed all the way down to the atoms (double negations cancel)."""
    if isinstance(f, Atom):
        return NegAtom(f.pigeon, f.hole)
    if isinstance(f, NegAtom):
        return Atom(f.pigeon, f.hole)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, Not):
        return f.body
    if isinstance(f, ForallLe):
        return ExistsLe(f.var, f.bound, negate(f.body))
    return ForallLe(f.var, f.bound, negate(f.body))


def atoms_to_literals(f: Formula) -> Formula:
    """Rewrite every ``Not(Atom)`` into ``NegAtom``; all other negations stay."""
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        if isinstance(f.body, Atom):
            return NegAtom(f.body.pigeon, f.body.hole, f.pos)
        return Not(atoms_to_literals(f.body), f.pos)
    if isinstance(f, BINARY):
        return type(f)(atoms_to_literals(f.left), atoms_to_literals(f.right), f.pos)
    return type(f)(f.var, f.bound, atoms_to_literals(f.body), f.pos)


def depth(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 0
    if isinstance(f, BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + depth(f.body)


def size(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, BINARY):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


# pigeonhole schemas ----------------------------------------------------------

PHP_BUDGET = 100_000


def _collision_clauses(n_pigeons: int, n_holes: int) -> list[Formula]:
    out: list[Formula] = []
    for a in range(n_pigeons):
        for a2 in range(a + 1, n_pigeons):
            for b in range(n_holes):
                out.append(And(Atom(a, b), Atom(a2, b)))
    for a in range(n_pigeons):
        for b in range(n_holes):
            for b2 in range(b + 1, n_holes):
                out.append(And(Atom(a, b), Atom(a, b2)))
    return out


def make_php_instance(kind: str, n_pigeons: int | None = None, n_holes: int | None = None,
                      budget: int = PHP_BUDGET) -> Formula:
    """The pigeonhole disjunction for ``R`` with explicit integer indices.

    ``kind`` is ``"plain"``, ``"onto"`` or ``"weak"``.  The weak principle has
    ``2m`` pigeons and ``m`` holes; pass ``m`` as ``n_holes`` (``n_pigeons`` may
    be omitted).  The distinct-index existentials are expanded into explicit
    disjunctions over index pairs; clauses with no index pairs are omitted.
    """
    if kind == "weak":
        if n_holes is None:
            raise ValueError("weak instance needs n_holes (= m)")
        if n_pigeons not in (None, 2 * n_holes):
            raise ValueError(f"weak instance has 2m = {2 * n_holes} pigeons, got {n_pigeons}")
        n_pigeons = 2 * n_holes
    elif kind not in ("plain", "onto"):
        raise ValueError(f"unknown kind {kind!r}")
    if n_pigeons is None or n_holes is None or n_pigeons < 1 or n_holes < 1:
        raise ValueError("need n_pigeons >= 1 and n_holes >= 1")
    n_clauses = n_pigeons * (n_pigeons - 1) // 2 * n_holes + n_pigeons * n_holes * (n_holes - 1) // 2
    if n_clauses > budget:
        raise BudgetExceeded(f"{n_clauses} collision clauses exceed the budget {budget}")

    clauses: list[Formula] = [
        ExistsLe("a", n_pigeons - 1, ForallLe("b", n_holes - 1, NegAtom("a", "b")))
    ]
    clauses += _collision_clauses(n_pigeons, n_holes)
    if kind == "onto":
        clauses.append(ExistsLe("b", n_holes - 1, ForallLe("a", n_pigeons - 1, NegAtom("a", "b"))))
    return disj(*clauses)


def formula_php_clauses(phi: Formula, n_pigeons: int, n_holes: int, x: str = "x", y: str = "y"):
    """The three bullets of the pigeonhole principle for a relation given by ``phi(x, y)``.

    Returns ``(pigeon_collisions, hole_collisions, empty_rows)`` where each
    collision is a conjunction of two instances and each empty row is the list
    of instances ``phi(a, b)`` over all holes ``b``.
    """

    def inst(a, b):
        return instantiate(phi, **{x: a, y: b})

    pigeon_coll = [
        ((a, a2, b), And(inst(a, b), inst(a2, b)))
        for b in range(n_holes)
        for a in range(n_pigeons)
        for a2 in range(a + 1, n_pigeons)
    ]
    hole_coll = [
        ((a, b, b2), And(inst(a, b), inst(a, b2)))
        for a in range(n_pigeons)
        for b in range(n_holes)
        for b2 in range(b + 1, n_holes)
    ]
    rows = [(a, [inst(a, b) for b in range(n_holes)]) for a in range(n_pigeons)]
    return pigeon_coll, hole_coll, rows


def iter_subformulas(f: Formula) -> Iterable[Formula]:
    yield f
    if isinstance(f, BINARY):
        yield from iter_subformulas(f.left)
        yield from iter_subformulas(f.right)
    elif not isinstance(f, ATOMS):
        yield from iter_subformulas(f.body)
