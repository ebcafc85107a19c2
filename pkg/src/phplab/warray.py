"""WPHP-arrays: ``[2m] x [m]`` grids of condition sets, and their size bounds.

An array over a base condition ``sigma`` must satisfy

* p1: a condition never repeats within a column or within a row;
* p2: distinct conditions in the same column are incompatible;
* p3: distinct conditions in the same row are incompatible;
* p4: for every ``rho`` extending ``sigma`` (in ``P(n, K)``) and every row,
  some entry of the row is compatible with ``rho``.

Every entry has size at most ``k``, is compatible with ``sigma`` and shares no
pair with it.  Counting shows such arrays are too large to exist: uniformizing
the rows forces ``N >= 2m (n-s)!/(n-s-k')!`` while an Erdos-Ko-Rado style
argument caps ``N <= m (n+1-s)!/(n+1-s-k)!``.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .conditions import Condition, Scale, compatible, conflicts, enumerate_conditions, extensions
from .errors import BudgetExceeded, IdentityViolation, PreconditionError, RegimeError
from .phptree import (
    LeafFamily,
    PhpTree,
    covering_witness,
    decide_condition_tree,
    extend_uniform,
    graft,
    leaves,
    root_only,
)

DEFAULT_SEARCH_NODES = 1_000_000

Cells = tuple[tuple[tuple[Condition, ...], ...], ...]


@dataclass(frozen=True)
class WArray:
    m: int
    k: int
    base: Condition
    scale: Scale
    cells: Cells  # cells[a][b], a in [2m], b in [m]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"need m >= 1, got {self.m}")
        cells = tuple(tuple(tuple(sorted(set(cell), key=Condition.sort_key)) for cell in row) for row in self.cells)
        if len(cells) != 2 * self.m or any(len(row) != self.m for row in cells):
            raise ValueError(f"cells must form a {2 * self.m} x {self.m} grid")
        for a, b, tau in _entries(cells):
            if len(tau) > self.k:
                raise ValueError(f"entry {tau} at ({a},{b}) is larger than k={self.k}")
            if conflicts(tau, self.base):
                raise ValueError(f"entry {tau} at ({a},{b}) is incompatible with the base {self.base}")
            if not tau.isdisjoint(self.base):
                raise ValueError(f"entry {tau} at ({a},{b}) intersects the base {self.base}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_grid(cls, grid, m: int, k: int, base: Condition, scale: Scale) -> "WArray":
        """Build from any nested iterable (or a ``{(a, b): conditions}`` mapping)."""
        if isinstance(grid, dict):
            grid = [[grid.get((a, b), ()) for b in range(m)] for a in range(2 * m)]
        return cls(m, k, base, scale, tuple(tuple(tuple(c) for c in row) for row in grid))

    @classmethod
    def empty(cls, m: int, k: int, base: Condition, scale: Scale) -> "WArray":
        return cls.from_grid({}, m, k, base, scale)

    def cell(self, a: int, b: int) -> tuple[Condition, ...]:
        return self.cells[a][b]

    def row(self, a: int) -> set[Condition]:
        return set().union(*self.cells[a])

    def column(self, b: int) -> set[Condition]:
        return set().union(*(row[b] for row in self.cells))

    def entries(self) -> Iterator[tuple[int, int, Condition]]:
        return _entries(self.cells)


def _entries(cells) -> Iterator[tuple[int, int, Condition]]:
    for a, row in enumerate(cells):
        for b, cell in enumerate(row):
            for tau in cell:
                yield a, b, tau


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of :func:`verify_properties`; every failed flag has a witness."""

    p1: bool
    p2: bool
    p3: bool
    p4: bool
    entry_constraint: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.p4 and self.entry_constraint

    def failures(self) -> list[str]:
        return [name for name in ("p1", "p2", "p3", "p4", "entry_constraint") if not getattr(self, name)]

    def to_json(self) -> dict:
        out = {name: getattr(self, name) for name in ("p1", "p2", "p3", "p4", "entry_constraint")}
        out["witnesses"] = self.witnesses
        return out


def _p1_witness(A: WArray):
    for b in range(A.m):
        for a, a2 in itertools.combinations(range(2 * A.m), 2):
            shared = set(A.cells[a][b]) & set(A.cells[a2][b])
            if shared:
                return {"cells": [[a, b], [a2, b]], "condition": str(min(shared))}
    for a in range(2 * A.m):
        for b, b2 in itertools.combinations(range(A.m), 2):
            shared = set(A.cells[a][b]) & set(A.cells[a][b2])
            if shared:
                return {"cells": [[a, b], [a, b2]], "condition": str(min(shared))}
    return None


def _pairwise_witness(groups):
    for where, items in groups:
        for (i, tau), (j, tau2) in itertools.combinations(items, 2):
            if tau != tau2 and compatible(tau, tau2):
                return {"cells": [list(i), list(j)], "conditions": [str(tau), str(tau2)], where[0]: where[1]}
    return None


def _p4_witness(A: WArray):
    for rho in extensions(A.base, A.scale):
        for a in range(2 * A.m):
            if not any(compatible(tau, rho) for tau in A.row(a)):
                return {"rho": str(rho), "row": a}
    return None


def verify_properties(A: WArray) -> PropertyReport:
    witnesses = {}
    w1 = _p1_witness(A)
    cols = [(("column", b), [((a, b), tau) for a in range(2 * A.m) for tau in A.cells[a][b]]) for b in range(A.m)]
    w2 = _pairwise_witness(cols)
    rows = [(("row", a), [((a, b), tau) for b in range(A.m) for tau in A.cells[a][b]]) for a in range(2 * A.m)]
    w3 = _pairwise_witness(rows)
    w4 = _p4_witness(A)
    empties = [[a, b] for a, b, tau in A.entries() if len(tau) == 0]
    entry_ok = A.k >= 1 and not empties
    for name, w in (("p1", w1), ("p2", w2), ("p3", w3), ("p4", w4)):
        if w is not None:
            witnesses[name] = w
    if not entry_ok:
        witnesses["entry_constraint"] = {"k": A.k, "empty_entries": empties}
    return PropertyReport(w1 is None, w2 is None, w3 is None, w4 is None, entry_ok, witnesses)


def array_size(A: WArray) -> tuple[int, int, int]:
    """``(N, sum of row sizes, sum of column sizes)``; the three agree when p1 holds."""
    w = _p1_witness(A)
    if w is not None:
        raise IdentityViolation(f"cells are not disjoint: {w}")
    N = sum(len(cell) for row in A.cells for cell in row)
    by_rows = sum(len(A.row(a)) for a in range(2 * A.m))
    by_cols = sum(len(A.column(b)) for b in range(A.m))
    if not N == by_rows == by_cols:
        raise IdentityViolation(f"size identity fails: N={N}, rows={by_rows}, columns={by_cols}")
    return N, by_rows, by_cols


# row uniformization ------------------------------------------------------------


def _check_row(row: Sequence[Condition], k: int, sigma: Condition, s: Scale):
    if k < 1:
        raise PreconditionError(f"need k >= 1, got {k}")
    if not row:
        raise PreconditionError("row is empty")
    for tau in row:
        if len(tau) == 0:
            raise PreconditionError("row contains the empty condition")
        if len(tau) > k:
            raise PreconditionError(f"row member {tau} is larger than k={k}")
        if conflicts(tau, sigma) or not tau.isdisjoint(sigma):
            raise PreconditionError(f"row member {tau} is not compatible with and disjoint from {sigma}")
    for tau, tau2 in itertools.combinations(row, 2):
        if compatible(tau, tau2):
            raise PreconditionError(f"row members {tau} and {tau2} are compatible")
    if 2 * k * k + s.K + len(sigma) > s.n:
        raise RegimeError(f"uniformizing needs 2k^2 + K + |sigma| <= n (k={k}, K={s.K}, |sigma|={len(sigma)}, n={s.n})")
    rho = covering_witness(LeafFamily(tuple(row), sigma), s)
    if rho is not None:
        raise PreconditionError(f"row does not cover {rho}", report={"rho": str(rho)})


def row_uniformization_steps(row: Iterable[Condition], k: int, sigma: Condition, s: Scale) -> Iterator[tuple[PhpTree, dict]]:
    """Run the grafting loop, yielding ``(P_i, choices)`` after each of the ``k`` steps.

    At step ``i`` every leaf ``rho`` of ``P_{i-1}`` picks the smallest row
    member compatible with it, builds a tree deciding that member below
    ``sigma | rho``, pads it to depth ``2k`` and grafts it on.  ``choices``
    maps each leaf of ``P_{i-1}`` to the member it picked.
    """
    row = sorted(set(row), key=Condition.sort_key)
    _check_row(row, k, sigma, s)
    tree = root_only(sigma, s)
    for _ in range(k):
        attachments, choices = {}, {}
        for rho, _leaf in tree.walk():
            pick = next((pi for pi in row if compatible(pi, rho)), None)
            if pick is None:
                raise RegimeError(f"leaf {rho} is compatible with no row member")
            below = sigma.union(rho)
            attachments[rho] = extend_uniform(decide_condition_tree(below, pick, s), 2 * k)
            choices[rho] = pick
        tree = graft(tree, attachments)
        yield tree, choices


def uniformize_row(row: Iterable[Condition], k: int, sigma: Condition, s: Scale) -> LeafFamily:
    """Leaf family of a ``2k^2``-uniform tree whose leaves each extend one row member."""
    tree = None
    for tree, _ in row_uniformization_steps(row, k, sigma, s):
        pass
    return leaves(tree)


def uniformize(A: WArray, pseudo: bool = False) -> WArray:
    """Replace every row by a ``2k^2``-uniform family, keeping each piece in its parent's column.

    With ``pseudo=True`` only the row-local preconditions (p1 within a row, p3
    and covering) are required, which lets the construction run on
    pseudo-arrays whose columns clash.
    """
    s, sigma, k = A.scale, A.base, A.k
    report = verify_properties(A)
    if pseudo:
        bad = [name for name in ("p3", "entry_constraint") if not getattr(report, name)]
        for a in range(2 * A.m):
            for b, b2 in itertools.combinations(range(A.m), 2):
                if set(A.cells[a][b]) & set(A.cells[a][b2]):
                    bad.append("p1")
        if not report.p4:
            bad.append("p4")
        if bad:
            raise PreconditionError(f"pseudo-array fails {sorted(set(bad))}", report=report)
    elif not report.ok:
        raise PreconditionError(f"array fails {report.failures()}", report=report)
    if 2 * k * k + s.K + len(sigma) > s.n:
        raise RegimeError(f"uniformizing needs 2k^2 + K + |sigma| <= n (k={k}, K={s.K}, |sigma|={len(sigma)}, n={s.n})")

    new_k = 2 * k * k
    grid: dict[tuple[int, int], list[Condition]] = {}
    for a in range(2 * A.m):
        column_of = {tau: b for b in range(A.m) for tau in A.cells[a][b]}
        for rho in uniformize_row(column_of, k, sigma, s):
            parents = [tau for tau in column_of if rho.issuperset(tau)]
            if len(parents) != 1:
                raise RegimeError(f"leaf {rho} extends {len(parents)} row members")
            grid.setdefault((a, column_of[parents[0]]), []).append(rho)
    return WArray.from_grid(grid, A.m, new_k, sigma, s)


# size bounds ---------------------------------------------------------------------


def lower_bound(n: int, s: int, k: int, m: int) -> int:
    """``2m (n-s)!/(n-s-k)!``: smallest size of a k-uniform array."""
    if m < 0 or s < 0 or k < 0 or k > n - s:
        raise RegimeError(f"lower bound needs 0 <= k <= n - s and m >= 0 (n={n}, s={s}, k={k}, m={m})")
    return 2 * m * math.perm(n - s, k)


def upper_bound(n: int, s: int, k: int, m: int) -> int:
    """``m (n+1-s)!/(n+1-s-k)!``: largest size of a k-uniform array."""
    if m < 0 or s < 0 or k < 0 or k > n + 1 - s:
        raise RegimeError(f"upper bound needs 0 <= k <= n + 1 - s and m >= 0 (n={n}, s={s}, k={k}, m={m})")
    return m * math.perm(n + 1 - s, k)


def contradiction_check(n: int, s: int, k: int) -> tuple[bool, Fraction]:
    """Ratio ``(n+1-s)/(n+1-s-k)``; below 2 the two bounds cannot both hold."""
    if s < 0 or k < 0 or k >= n + 1 - s:
        raise RegimeError(f"need 0 <= k < n + 1 - s (n={n}, s={s}, k={k})")
    ratio = Fraction(n + 1 - s, n + 1 - s - k)
    return ratio < 2, ratio


def iroot(x: int, q: int) -> int:
    """Largest integer ``r`` with ``r**q <= x``."""
    if x < 0 or q < 1:
        raise ValueError("iroot needs x >= 0 and q >= 1")
    if x < 2 or q == 1:
        return x
    r = 1 << -(-x.bit_length() // q)  # an upper bound
    while True:
        nxt = ((q - 1) * r + x // r ** (q - 1)) // q
        if nxt >= r:
            break
        r = nxt
    while r ** q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


def floor_power(n: int, exponent: Fraction) -> int:
    """``floor(n ** exponent)`` for a rational exponent ``p/q >= 0``, exactly."""
    exponent = Fraction(exponent)
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    return iroot(n ** exponent.numerator, exponent.denominator)


def ajtai_check(n: int, s: int, k: int, eps) -> tuple[bool, Fraction, Fraction]:
    """Compare ``(h+1)/h`` with ``h = floor(n^(1-eps))`` against ``(n+1-s)/(n+1-s-k)``."""
    eps = Fraction(eps)
    if not 0 <= eps < 1:
        raise RegimeError(f"need 0 <= eps < 1, got {eps}")
    if s < 0 or k < 0 or k >= n + 1 - s:
        raise RegimeError(f"need 0 <= k < n + 1 - s (n={n}, s={s}, k={k})")
    holes = floor_power(n, 1 - eps)
    if holes < 1:
        raise RegimeError(f"floor(n^(1-eps)) = {holes} must be positive")
    lhs = Fraction(holes + 1, holes)
    rhs = Fraction(n + 1 - s, n + 1 - s - k)
    return lhs > rhs, lhs, rhs


# exhaustive search -------------------------------------------------------------


def search_budget() -> int:
    return int(os.environ.get("LAB_BUDGET_NODES", DEFAULT_SEARCH_NODES))


def brute_force_search_array(s: Scale, m: int, k: int, sigma: Condition = Condition(),
                             budget: int | None = None) -> WArray | None:
    """Exhaustively look for an array with entries drawn from ``P(n, K)``.

    Candidates are the nonempty conditions of size at most ``k`` that are
    compatible with and disjoint from ``sigma``.  Deleting entries keeps p1-p3
    intact, so it is enough to search for a minimal array: repeatedly take the
    uncovered ``(row, rho)`` with the fewest options and branch over every
    candidate and column that covers it without breaking p1-p3.  Returns
    ``None`` when the search space is exhausted; raises
    :class:`BudgetExceeded` after ``budget`` nodes (default:
    ``LAB_BUDGET_NODES`` or one million).
    """
    if budget is None:
        budget = search_budget()
    if k < 1:
        return None
    rhos = list(extensions(sigma, s))
    cands = [
        c for c in enumerate_conditions(s)
        if 1 <= len(c) <= k and not conflicts(c, sigma) and c.isdisjoint(sigma)
    ]
    everyone = (1 << len(cands)) - 1
    by_pigeon: dict[int, int] = {}
    by_hole: dict[int, int] = {}
    by_pair: dict[tuple[int, int], int] = {}
    for i, c in enumerate(cands):
        for p, h in c.pairs:
            by_pigeon[p] = by_pigeon.get(p, 0) | 1 << i
            by_hole[h] = by_hole.get(h, 0) | 1 << i
            by_pair[(p, h)] = by_pair.get((p, h), 0) | 1 << i

    def clashing(c: Condition) -> int:
        # candidates reusing a pigeon or hole of c with a different partner
        mask = 0
        for p, h in c.pairs:
            mask |= (by_pigeon.get(p, 0) | by_hole.get(h, 0)) & ~by_pair.get((p, h), 0)
        return mask

    clash = [clashing(c) for c in cands]
    covers = [everyone & ~clashing(rho) for rho in rhos]
    rows = 2 * m
    row_members: list[list[int]] = [[] for _ in range(rows)]
    col_members: list[list[int]] = [[] for _ in range(m)]
    uncovered = [set(range(len(rhos))) for _ in range(rows)]
    placed: dict[tuple[int, int], list[int]] = {}
    nodes = 0

    def allowed(a: int, b: int) -> int:
        mask = everyone
        for j in row_members[a]:
            mask &= clash[j]
        for j in col_members[b]:
            mask &= clash[j]
        return mask

    def dfs() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"array search exceeded {budget} nodes", partial={"nodes": nodes})
        best = None
        for a in range(rows):
            if not uncovered[a]:
                continue
            masks = [allowed(a, b) for b in range(m)]
            for r in sorted(uncovered[a]):
                count = sum((covers[r] & mask).bit_count() for mask in masks)
                if not count:
                    return False
                if best is None or count < best[0]:
                    best = (count, a, r, masks)
                    if count == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            return True
        _, a, r, masks = best
        opts = [(i, b) for b in range(m) for i in _bits(covers[r] & masks[b])]
        for i, b in opts:
            gained = {r for r in uncovered[a] if covers[r] >> i & 1}
            row_members[a].append(i)
            col_members[b].append(i)
            placed.setdefault((a, b), []).append(i)
            uncovered[a] -= gained
            if dfs():
                return True
            uncovered[a] |= gained
            placed[(a, b)].pop()
            col_members[b].pop()
            row_members[a].pop()
        return False

    if not dfs():
        return None
    grid = {cell: [cands[i] for i in idx] for cell, idx in placed.items()}
    return WArray.from_grid(grid, m, k, sigma, s)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# JSON form -----------------------------------------------------------------------


def array_to_json(A: WArray) -> dict:
    return {
        "m": A.m,
        "k": A.k,
        "sigma": str(A.base),
        "n": A.scale.n,
        "K": A.scale.K,
        "cells": [[[str(c) for c in cell] for cell in row] for row in A.cells],
    }


def array_from_json(obj: dict, K: int | None = None) -> WArray:
    """Read the JSON schema; ``K`` falls back to the document, then to ``min(k, n)``."""
    n, k, m = int(obj["n"]), int(obj["k"]), int(obj["m"])
    if K is None:
        K = int(obj.get("K", max(1, min(k, n))))
    grid = [[[Condition.parse(c) for c in cell] for cell in row] for row in obj["cells"]]
    return WArray.from_grid(grid, m, k, Condition.parse(obj.get("sigma", "{}")), Scale(n, K))
