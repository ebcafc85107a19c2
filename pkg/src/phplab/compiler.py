"""Compile bounded formulas into marked PHP decision trees.

The formula is evaluated left to right with short-circuiting, quantifiers
expanded in ascending order.  Whenever the value depends on an atom
``R(u, v)`` that the current path leaves open, the tree asks where pigeon
``u`` goes; the atom is true on the branch ``v`` and false elsewhere.  Atoms
already settled by the path (including ones made false because hole ``v`` is
taken) are never asked, so every path is a partial injection.
"""
from __future__ import annotations

from .conditions import Condition, Scale
from .errors import RegimeError, ShapeError
from .forcing import ForcingContext, forces, negation_for_forcing
from .formula import (
    And,
    Atom,
    ExistsLe,
    ForallLe,
    Formula,
    NegAtom,
    Not,
    Or,
    Shape,
    classify,
    formula_php_clauses,
    free_vars,
    instantiate,
    substitute,
)
from .phptree import Leaf, LeafFamily, PhpTree, PigeonQuery
from .warray import WArray


class _Ask:
    __slots__ = ("pigeon",)

    def __init__(self, pigeon: int):
        self.pigeon = pigeon


def _evaluate(f: Formula, fwd: dict[int, int], inv: dict[int, int], s: Scale):
    """True/False if the path settles ``f``, else an :class:`_Ask` for the next pigeon."""
    if isinstance(f, (Atom, NegAtom)):
        a, b = f.pigeon, f.hole
        if not (0 <= a <= s.n and 0 <= b < s.n):
            value = False
        elif a in fwd:
            value = fwd[a] == b
        elif b in inv:
            value = False
        else:
            return _Ask(a)
        return value if isinstance(f, Atom) else not value
    if isinstance(f, Not):
        v = _evaluate(f.body, fwd, inv, s)
        return v if isinstance(v, _Ask) else not v
    if isinstance(f, (And, Or)):
        parts = (f.left, f.right)
        stop = isinstance(f, Or)
    elif isinstance(f, (ForallLe, ExistsLe)):
        parts = (substitute(f.body, f.var, i) for i in range(f.bound + 1))
        stop = isinstance(f, ExistsLe)
    else:
        raise TypeError(f"not a formula: {f!r}")
    for part in parts:
        v = _evaluate(part, fwd, inv, s)
        if isinstance(v, _Ask) or v == stop:
            return v
    return not stop


def compile_formula(phi: Formula, sigma: Condition, s: Scale) -> PhpTree:
    """Marked PHP-tree over ``sigma`` whose leaves accept exactly where ``phi`` holds."""
    unbound = free_vars(phi)
    if unbound:
        raise ShapeError(f"formula has free variables {sorted(unbound)}")
    if classify(phi) is Shape.GENERAL:
        raise ShapeError(f"cannot compile a formula of general shape: {phi}")
    if not s.fits(sigma):
        raise RegimeError(f"{sigma} does not fit the universe of n={s.n}")
    base_fwd = sigma.as_dict()
    base_inv = {h: p for p, h in sigma.pairs}

    # an open atom R(u, v) has v free, so every query has at least one answer
    def build(fwd, inv):
        v = _evaluate(phi, fwd, inv, s)
        if not isinstance(v, _Ask):
            return Leaf(v)
        a = v.pigeon
        kids = tuple((h, build({**fwd, a: h}, {**inv, h: a})) for h in s.holes if h not in inv)
        return PigeonQuery(a, kids)

    return PhpTree(s, sigma, build(base_fwd, base_inv))


# the package-level name used in docs and the CLI
compile = compile_formula


def accepting_leaves(t: PhpTree) -> LeafFamily:
    return LeafFamily(tuple(lab for lab, leaf in t.walk() if leaf.mark is True), t.base)


def rejecting_leaves(t: PhpTree) -> LeafFamily:
    return LeafFamily(tuple(lab for lab, leaf in t.walk() if leaf.mark is False), t.base)


def build_array_from_formula(phi: Formula, m: int, sigma: Condition, s: Scale,
                             x: str = "x", y: str = "y") -> WArray:
    """Candidate array with cell ``(a, b)`` holding the accepting leaves for ``phi(a, b)``.

    No array property is checked here; pass the result to ``verify_properties``.
    """
    grid = {}
    for a in range(2 * m):
        for b in range(m):
            tree = compile_formula(instantiate(phi, **{x: a, y: b}), sigma, s)
            grid[(a, b)] = accepting_leaves(tree).leaves
    k = max([len(c) for cell in grid.values() for c in cell] + [1])
    return WArray.from_grid(grid, m, k, sigma, s)


def forced_violation(sigma: Condition, phi: Formula, m: int, ctx: ForcingContext,
                     x: str = "x", y: str = "y") -> dict | None:
    """Which bullet of the weak pigeonhole principle for ``phi`` is forced by ``sigma``, if any."""
    pigeon_coll, hole_coll, rows = formula_php_clauses(phi, 2 * m, m, x, y)
    for (a, a2, b), clause in pigeon_coll:
        if forces(sigma, clause, ctx):
            return {"kind": "pigeon-collision", "pigeons": [a, a2], "hole": b}
    for (a, b, b2), clause in hole_coll:
        if forces(sigma, clause, ctx):
            return {"kind": "hole-collision", "pigeon": a, "holes": [b, b2]}
    for a, instances in rows:
        if all(forces(sigma, negation_for_forcing(inst), ctx) for inst in instances):
            return {"kind": "empty-row", "pigeon": a}
    return None


def violation_forced(sigma: Condition, phi: Formula, m: int, ctx: ForcingContext,
                     x: str = "x", y: str = "y") -> bool:
    return forced_violation(sigma, phi, m, ctx, x, y) is not None
