"""Exact counting for k-matchings of the complete bipartite graph ``K_{d,c}``.

Matchings are :class:`~phplab.conditions.Condition` values with left vertices
(pigeons) in ``[d]`` and right vertices (holes) in ``[c]``.  Two matchings are
incompatible when their union is not a matching; sharing an identical edge
does not make them incompatible.

A pairwise-incompatible family of k-matchings holds at most ``d!/(d-k)!``
members: every c-matching contains at most one member, each member lies in
``(c-k)! C(d-k, c-k)`` of the ``c! C(d, c)`` c-matchings, and the quotient of
these two numbers is ``d!/(d-k)!``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .conditions import Condition, conflicts
from .errors import BudgetExceeded, RegimeError

DEFAULT_SEARCH_NODES = 5_000_000


def _domain(ok: bool, what: str):
    if not ok:
        raise RegimeError(what)


def count_k_matchings(d: int, c: int, k: int) -> int:
    _domain(0 <= k <= min(c, d), f"need 0 <= k <= min(c, d), got d={d}, c={c}, k={k}")
    return math.factorial(k) * math.comb(d, k) * math.comb(c, k)


def count_extensions(d: int, c: int, k: int) -> int:
    """Number of c-matchings containing a fixed k-matching."""
    _domain(0 <= k <= c <= d, f"need 0 <= k <= c <= d, got d={d}, c={c}, k={k}")
    return math.factorial(c - k) * math.comb(d - k, c - k)


def family_bound(d: int, k: int) -> int:
    _domain(0 <= k <= d, f"need 0 <= k <= d, got d={d}, k={k}")
    return math.perm(d, k)


def family_bound_via_extensions(d: int, c: int, k: int) -> int:
    """The same bound computed as (number of c-matchings) / (extensions per member)."""
    total = count_k_matchings(d, c, c)
    per_member = count_extensions(d, c, k)
    q, r = divmod(total, per_member)
    if r:
        raise ArithmeticError(f"{total} is not divisible by {per_member}")
    return q


def k_matchings(d: int, c: int, k: int) -> list[Condition]:
    _domain(0 <= k <= min(c, d), f"need 0 <= k <= min(c, d), got d={d}, c={c}, k={k}")
    out = [
        Condition(tuple(zip(left, right)))
        for left in itertools.combinations(range(d), k)
        for right in itertools.permutations(range(c), k)
    ]
    out.sort(key=Condition.sort_key)
    return out


@dataclass(frozen=True)
class MatchingFamily:
    d: int
    c: int
    k: int
    members: tuple[Condition, ...]

    def __post_init__(self):
        if not 0 <= self.k <= self.c <= self.d:
            raise RegimeError(f"need k <= c <= d, got d={self.d}, c={self.c}, k={self.k}")
        members = tuple(sorted(set(self.members), key=Condition.sort_key))
        for mm in members:
            if len(mm) != self.k:
                raise ValueError(f"{mm} is not a {self.k}-matching")
            if any(not (0 <= p < self.d and 0 <= h < self.c) for p, h in mm):
                raise ValueError(f"{mm} is not inside K_({self.d},{self.c})")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def is_pairwise_incompatible(self) -> bool:
        return all(conflicts(a, b) for a, b in itertools.combinations(self.members, 2))


def fixed_holes_family(d: int, k: int, c: int | None = None) -> MatchingFamily:
    """All k-matchings whose right endpoints are exactly ``{0, ..., k-1}``."""
    _domain(0 <= k <= d, f"need 0 <= k <= d, got d={d}, k={k}")
    c = k if c is None else c
    members = tuple(
        Condition(tuple(zip(pigeons, range(k)))) for pigeons in itertools.permutations(range(d), k)
    )
    return MatchingFamily(d, c, k, members)


def brute_force_max_family(d: int, c: int, k: int, budget: int = DEFAULT_SEARCH_NODES) -> tuple[int, MatchingFamily]:
    """Largest pairwise-incompatible family of k-matchings, by exhaustive branch and bound.

    This is a maximum clique search in the graph whose vertices are the
    k-matchings and whose edges join incompatible pairs.  Candidates are
    bounded with a greedy colouring; the first optimum found in canonical
    order is returned as the witness.
    """
    _domain(0 <= k <= c <= d, f"need 0 <= k <= c <= d, got d={d}, c={c}, k={k}")
    verts = k_matchings(d, c, k)
    adj = [0] * len(verts)
    for i, j in itertools.combinations(range(len(verts)), 2):
        if conflicts(verts[i], verts[j]):
            adj[i] |= 1 << j
            adj[j] |= 1 << i

    best: list[int] = []
    nodes = 0

    def colour_order(P: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        uncoloured, colour = P, 0
        while uncoloured:
            colour += 1
            Q = uncoloured
            while Q:
                v = (Q & -Q).bit_length() - 1
                Q &= ~(1 << v) & ~adj[v]
                uncoloured &= ~(1 << v)
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(R: list[int], P: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"family search exceeded {budget} nodes",
                                 partial={"best_so_far": len(best)})
        order, bounds = colour_order(P)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + bounds[idx] <= len(best):
                return
            v = order[idx]
            R.append(v)
            rest = P & adj[v]
            if rest:
                expand(R, rest)
            elif len(R) > len(best):
                best = R[:]
            R.pop()
            P &= ~(1 << v)

    if verts:
        expand([], (1 << len(verts)) - 1)
    family = MatchingFamily(d, c, k, tuple(verts[i] for i in best))
    return len(family), family
