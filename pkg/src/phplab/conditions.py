"""Forcing conditions: partial injective maps from pigeons ``[n+1]`` to holes ``[n]``.

A :class:`Condition` is an immutable set of ``(pigeon, hole)`` pairs kept in
canonical order (sorted by pigeon), so two conditions are equal exactly when
they contain the same pairs.  The finite poset ``P(n, K)`` consists of all
conditions of size at most ``K`` over a :class:`Scale`; a condition ``a``
*extends* ``b`` (``a <= b`` in poset notation) when ``a`` is a superset of ``b``.

Two notions of compatibility are used throughout the package:

* :func:`conflicts` / :func:`compatible` look only at injectivity of the union,
  which is what trees, leaf families and arrays need;
* :func:`is_compatible` additionally requires the union to fit under the
  size cap ``K`` of a scale, i.e. to be an element of ``P(n, K)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterable, Iterator

from .errors import BudgetExceeded, RegimeError

#: default cap on the number of conditions :func:`enumerate_conditions` will build
ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class Scale:
    """Finite ambient parameters: ``n`` holes, ``n + 1`` pigeons, size cap ``K``."""

    n: int
    K: int

    def __post_init__(self):
        if self.n < 1:
            raise RegimeError(f"need n >= 1, got n={self.n}")
        if not 1 <= self.K <= self.n:
            raise RegimeError(f"need 1 <= K <= n, got K={self.K}, n={self.n}")

    @property
    def pigeons(self) -> range:
        return range(self.n + 1)

    @property
    def holes(self) -> range:
        return range(self.n)

    def fits(self, c: "Condition") -> bool:
        """True if ``c`` lives in the universe of this scale (ignoring the cap)."""
        return all(0 <= p <= self.n and 0 <= h < self.n for p, h in c.pairs)

    def admits(self, c: "Condition") -> bool:
        """True if ``c`` is an element of ``P(n, K)``."""
        return len(c) <= self.K and self.fits(c)


@total_ordering
@dataclass(frozen=True, eq=True)
class Condition:
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted({(int(p), int(h)) for p, h in self.pairs}))
        if len({p for p, _ in pairs}) != len(pairs):
            raise ValueError(f"pigeon mapped to two holes in {pairs}")
        if len({h for _, h in pairs}) != len(pairs):
            raise ValueError(f"hole used by two pigeons in {pairs}")
        if pairs and (pairs[0][0] < 0 or min(h for _, h in pairs) < 0):
            raise ValueError(f"negative index in {pairs}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "Condition":
        return cls(tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> "Condition":
        """Read the ``p->h,p->h`` text form; ``{}`` (or blank) is the empty condition."""
        text = text.strip()
        if text in ("", "{}"):
            return cls()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        pairs = []
        for item in text.split(","):
            left, sep, right = item.partition("->")
            if not sep:
                raise ValueError(f"bad condition entry {item!r}; expected 'p->h'")
            pairs.append((int(left), int(right)))
        return cls(tuple(pairs))

    def __str__(self) -> str:
        if not self.pairs:
            return "{}"
        return ",".join(f"{p}->{h}" for p, h in self.pairs)

    def __repr__(self) -> str:
        return f"Condition({str(self)!r})"

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __lt__(self, other: "Condition") -> bool:
        if not isinstance(other, Condition):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (len(self.pairs), self.pairs)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.pairs)

    @property
    def range(self) -> frozenset[int]:
        return frozenset(h for _, h in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def union(self, other: "Condition") -> "Condition":
        """Union of two conditions; raises ``ValueError`` if they conflict."""
        return Condition(self.pairs + other.pairs)

    def difference(self, other: "Condition") -> "Condition":
        drop = set(other.pairs)
        return Condition(tuple(pr for pr in self.pairs if pr not in drop))

    def intersection(self, other: "Condition") -> "Condition":
        keep = set(other.pairs)
        return Condition(tuple(pr for pr in self.pairs if pr in keep))

    def isdisjoint(self, other: "Condition") -> bool:
        return not set(self.pairs) & set(other.pairs)

    def issubset(self, other: "Condition") -> bool:
        return set(self.pairs) <= set(other.pairs)

    def issuperset(self, other: "Condition") -> bool:
        return set(self.pairs) >= set(other.pairs)


EMPTY = Condition()


def conflicts(a: Condition, b: Condition) -> bool:
    """True if ``a`` and ``b`` send a pigeon to two holes or a hole to two pigeons."""
    amap = dict(a.pairs)
    ainv = {h: p for p, h in a.pairs}
    for p, h in b.pairs:
        if p in amap and amap[p] != h:
            return True
        if h in ainv and ainv[h] != p:
            return True
    return False


def compatible(a: Condition, b: Condition) -> bool:
    """Uncapped compatibility: the union of ``a`` and ``b`` is injective both ways."""
    return not conflicts(a, b)


def is_compatible(a: Condition, b: Condition, s: Scale | None = None) -> bool:
    """Compatibility in ``P(n, K)``: the union is injective and has size at most ``K``.

    With ``s=None`` the size cap is dropped and this equals :func:`compatible`.
    """
    if conflicts(a, b):
        return False
    if s is None:
        return True
    return len(set(a.pairs) | set(b.pairs)) <= s.K


def extends(a: Condition, b: Condition) -> bool:
    """``a <= b`` in the forcing order, i.e. ``a`` contains every pair of ``b``."""
    return a.issuperset(b)


def count_conditions(s: Scale) -> int:
    """Size of ``P(n, K)``: sum over j <= K of j! * C(n+1, j) * C(n, j)."""
    return sum(
        math.factorial(j) * math.comb(s.n + 1, j) * math.comb(s.n, j)
        for j in range(s.K + 1)
    )


def _grow(base: Condition, free_pigeons, free_holes, max_new: int) -> list[Condition]:
    out = []
    for j in range(max_new + 1):
        for ps in itertools.combinations(free_pigeons, j):
            for hs in itertools.permutations(free_holes, j):
                out.append(Condition(base.pairs + tuple(zip(ps, hs))))
    out.sort(key=Condition.sort_key)
    return out


def enumerate_conditions(s: Scale, limit: int = ENUMERATION_LIMIT) -> tuple[Condition, ...]:
    """Every condition of ``P(n, K)`` exactly once, ordered by size then lexicographically."""
    total = count_conditions(s)
    if total > limit:
        raise BudgetExceeded(f"P(n={s.n}, K={s.K}) has {total} conditions, limit is {limit}")
    return _enumerate_cached(s)


@lru_cache(maxsize=64)
def _enumerate_cached(s: Scale) -> tuple[Condition, ...]:
    return tuple(_grow(EMPTY, list(s.pigeons), list(s.holes), s.K))


def extensions(sigma: Condition, s: Scale, limit: int = ENUMERATION_LIMIT) -> tuple[Condition, ...]:
    """All ``tau <= sigma`` in ``P(n, K)`` (``sigma`` itself first), in canonical order."""
    if not s.admits(sigma):
        raise RegimeError(f"{sigma} is not a condition of P(n={s.n}, K={s.K})")
    if count_conditions(s) > limit:
        raise BudgetExceeded(f"P(n={s.n}, K={s.K}) exceeds the enumeration limit {limit}")
    return _extensions_cached(sigma, s)


@lru_cache(maxsize=4096)
def _extensions_cached(sigma: Condition, s: Scale) -> tuple[Condition, ...]:
    free_p = [p for p in s.pigeons if p not in sigma.domain]
    free_h = [h for h in s.holes if h not in sigma.range]
    return tuple(_grow(sigma, free_p, free_h, s.K - len(sigma)))


def is_filter(members: Iterable[Condition], s: Scale) -> bool:
    """Pairwise compatible (in ``P(n, K)``) and closed upwards, i.e. under taking subsets."""
    members = set(members)
    if not all(s.admits(c) for c in members):
        return False
    for a, b in itertools.combinations(members, 2):
        if not is_compatible(a, b, s):
            return False
    for c in members:
        for j in range(len(c)):
            for sub in itertools.combinations(c.pairs, j):
                if Condition(sub) not in members:
                    return False
    return True
