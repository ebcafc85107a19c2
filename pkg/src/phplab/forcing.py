"""The finite forcing relation ``sigma ||- phi`` over ``P(n, K)``.

Forcing is defined by recursion on the formula:

1. ``R(a,b)``: the pair ``(a,b)`` belongs to ``sigma``.
2. ``!R(a,b)``: ``sigma`` sends ``a`` elsewhere or fills ``b`` with another pigeon.
3. ``phi & theta``: both conjuncts are forced.
4. ``A u <= t . phi``: every instance ``phi(0..t)`` is forced.
5. ``!phi`` (``phi`` sharply bounded): no extension of ``sigma`` forces ``phi``.
6. ``phi | theta``: below every extension there is one forcing a disjunct.
7. ``E u <= t . phi``: below every extension there is one forcing some instance.

Extensions range over ``P(n, K)`` only, so ``K`` acts as a hard horizon: a
condition of size ``K`` has no proper extensions.  This is why the literal
``!R(a,b)`` (clause 2) and an explicit negation node ``!(R(a,b))`` (clause 5)
are kept apart: they agree below the horizon but not on conditions of size
``K``, and only clause 5 makes ``phi & theta`` and ``!((!phi) | (!theta))``
agree everywhere.  Atoms whose pigeon or hole
lies outside ``[n+1] x [n]`` are false under every matching, so ``R`` of them
is never forced and their negation always is.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .conditions import Condition, Scale, extensions
from .errors import RegimeError, ShapeError
from .formula import (
    And,
    Atom,
    ExistsLe,
    ForallLe,
    Formula,
    NegAtom,
    Not,
    Or,
    existential_prefix,
    free_vars,
    is_sharply_bounded,
    substitute,
)

CLAUSE_IDS = {
    Atom: "1-atom",
    NegAtom: "2-negated-atom",
    And: "3-and",
    ForallLe: "4-forall",
    Not: "5-not",
    Or: "6-or",
    ExistsLe: "7-exists",
}


@dataclass
class ForcingContext:
    scale: Scale
    memo: dict = field(default_factory=dict)
    trace: list | None = None

    @classmethod
    def tracing(cls, scale: Scale) -> "ForcingContext":
        return cls(scale, trace=[])


def _in_universe(s: Scale, a: int, b: int) -> bool:
    return 0 <= a <= s.n and 0 <= b < s.n


def forces(sigma: Condition, phi: Formula, ctx: ForcingContext) -> bool:
    """Whether ``sigma`` forces the closed formula ``phi`` in ``P(n, K)``."""
    if not ctx.scale.admits(sigma):
        raise RegimeError(f"{sigma} is not a condition of P(n={ctx.scale.n}, K={ctx.scale.K})")
    unbound = free_vars(phi)
    if unbound:
        raise ShapeError(f"formula has free variables {sorted(unbound)}")
    return _forces(sigma, phi, ctx)


def _forces(sigma: Condition, phi: Formula, ctx: ForcingContext) -> bool:
    key = (sigma, phi)
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    verdict = _clause(sigma, phi, ctx)
    ctx.memo[key] = verdict
    if ctx.trace is not None:
        ctx.trace.append((str(sigma), str(phi), CLAUSE_IDS[type(phi)], verdict))
    return verdict


def _clause(sigma: Condition, phi: Formula, ctx: ForcingContext) -> bool:
    s = ctx.scale
    if isinstance(phi, Atom):
        return (phi.pigeon, phi.hole) in sigma
    if isinstance(phi, NegAtom):
        a, b = phi.pigeon, phi.hole
        if not _in_universe(s, a, b):
            return True
        fwd = sigma.as_dict()
        if a in fwd and fwd[a] != b:
            return True
        return any(h == b and p != a for p, h in sigma.pairs)
    if isinstance(phi, And):
        return _forces(sigma, phi.left, ctx) and _forces(sigma, phi.right, ctx)
    if isinstance(phi, ForallLe):
        return all(
            _forces(sigma, substitute(phi.body, phi.var, i), ctx) for i in range(phi.bound + 1)
        )
    if isinstance(phi, Not):
        if not is_sharply_bounded(phi.body):
            raise ShapeError(f"negation of a formula that is not sharply bounded: {phi}")
        return not any(_forces(tau, phi.body, ctx) for tau in extensions(sigma, s))
    if isinstance(phi, Or):
        parts = [phi.left, phi.right]
    elif isinstance(phi, ExistsLe):
        parts = [substitute(phi.body, phi.var, i) for i in range(phi.bound + 1)]
    else:
        raise TypeError(f"not a formula: {phi!r}")

    def some_part(rho):
        return any(_forces(rho, part, ctx) for part in parts)

    return _dense_below(sigma, some_part, s)


def _dense_below(sigma: Condition, pred: Callable[[Condition], bool], s: Scale) -> bool:
    # pred is monotone here, so holding at sigma settles it
    if pred(sigma):
        return True
    exts = extensions(sigma, s)
    good = [rho for rho in exts if pred(rho)]
    return all(any(rho.issuperset(tau) for rho in good) for tau in exts)


def density_witness(pred: Callable[[Condition], bool], sigma: Condition, s: Scale) -> Condition | None:
    """First extension of ``sigma`` with no extension satisfying ``pred``, or ``None``."""
    exts = extensions(sigma, s)
    good = [rho for rho in exts if pred(rho)]
    for tau in exts:
        if not any(rho.issuperset(tau) for rho in good):
            return tau
    return None


def is_dense(pred: Callable[[Condition], bool], s: Scale) -> bool:
    """Every condition of ``P(n, K)`` has an extension satisfying ``pred``."""
    return density_witness(pred, Condition(), s) is None


def is_dense_relative(pred: Callable[[Condition], bool], sigma: Condition, s: Scale) -> bool:
    """Density checked only over the extensions of ``sigma``."""
    return density_witness(pred, sigma, s) is None


def negation_for_forcing(phi: Formula) -> Formula:
    """A forceable negation of an atomic, sharply-bounded or existential-prefix formula.

    ``!E u <= t . psi`` becomes ``A u <= t . !psi`` so that the negation lands
    on the sharply-bounded matrix.
    """
    prefix, matrix = existential_prefix(phi)
    if not is_sharply_bounded(matrix):
        raise ShapeError(f"cannot negate {phi}: matrix is not sharply bounded")
    if isinstance(matrix, Atom):
        neg: Formula = NegAtom(matrix.pigeon, matrix.hole)
    else:
        neg = Not(matrix)
    for var, bound in reversed(prefix):
        neg = ForallLe(var, bound, neg)
    return neg
