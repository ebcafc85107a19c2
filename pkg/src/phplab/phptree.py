"""Decision trees over partial matchings ("PHP-trees").

A tree is rooted at a base condition ``sigma``.  Inner nodes either ask where a
pigeon goes (:class:`PigeonQuery`, one child per still-free hole) or which
pigeon occupies a hole (:class:`HoleQuery`, one child per still-free pigeon).
The pairs on the edges from the root to a node form that node's *label*; labels
never include ``sigma`` itself.  Leaves may carry an accept/reject mark, which
only the formula compiler uses.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from .conditions import Condition, Scale, conflicts, extensions
from .errors import GraftError, RegimeError


@dataclass(frozen=True)
class Leaf:
    mark: bool | None = None


@dataclass(frozen=True)
class PigeonQuery:
    pigeon: int
    children: tuple[tuple[int, "Node"], ...]  # (hole, subtree)

    def edge(self, key: int) -> tuple[int, int]:
        return (self.pigeon, key)


@dataclass(frozen=True)
class HoleQuery:
    hole: int
    children: tuple[tuple[int, "Node"], ...]  # (pigeon, subtree)

    def edge(self, key: int) -> tuple[int, int]:
        return (key, self.hole)


Node = Union[Leaf, PigeonQuery, HoleQuery]


@dataclass(frozen=True)
class PhpTree:
    scale: Scale
    base: Condition
    root: Node = field(default_factory=Leaf)

    def walk(self) -> Iterator[tuple[Condition, Leaf]]:
        """Yield ``(label, leaf)`` for every leaf, depth first in key order."""
        stack: list[tuple[tuple[tuple[int, int], ...], Node]] = [((), self.root)]
        while stack:
            path, node = stack.pop()
            if isinstance(node, Leaf):
                yield Condition(path), node
                continue
            for key, child in reversed(node.children):
                stack.append((path + (node.edge(key),), child))

    @property
    def depth(self) -> int:
        return max(self.leaf_depths())

    def leaf_depths(self) -> set[int]:
        out = set()
        stack = [(0, self.root)]
        while stack:
            d, node = stack.pop()
            if isinstance(node, Leaf):
                out.add(d)
            else:
                stack.extend((d + 1, child) for _, child in node.children)
        return out

    def is_uniform(self, k: int | None = None) -> bool:
        depths = self.leaf_depths()
        return len(depths) == 1 and (k is None or depths == {k})

    def marks(self) -> dict[Condition, bool | None]:
        return {lab: leaf.mark for lab, leaf in self.walk()}


@dataclass(frozen=True)
class LeafFamily:
    """The set of leaf labels of some tree, together with the tree's base."""

    leaves: tuple[Condition, ...]
    base: Condition = Condition()

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(set(self.leaves), key=Condition.sort_key)))

    def __len__(self):
        return len(self.leaves)

    def __iter__(self):
        return iter(self.leaves)

    def __contains__(self, c):
        return c in self.leaves

    def is_antichain(self) -> bool:
        return all(conflicts(a, b) for a, b in itertools.combinations(self.leaves, 2))

    def problems(self) -> list[str]:
        out = []
        for a, b in itertools.combinations(self.leaves, 2):
            if not conflicts(a, b):
                out.append(f"{a} and {b} are compatible")
        for c in self.leaves:
            if not c.isdisjoint(self.base):
                out.append(f"{c} intersects the base {self.base}")
            if conflicts(c, self.base):
                out.append(f"{c} conflicts with the base {self.base}")
        return out


def root_only(base: Condition, s: Scale, mark: bool | None = None) -> PhpTree:
    return PhpTree(s, base, Leaf(mark))


def leaves(t: PhpTree) -> LeafFamily:
    return LeafFamily(tuple(lab for lab, _ in t.walk()), t.base)


def _free(base: Condition, s: Scale):
    return (
        [p for p in s.pigeons if p not in base.domain],
        [h for h in s.holes if h not in base.range],
    )


def pigeon_chain(sigma: Condition, k: int, s: Scale) -> PhpTree:
    """k-uniform tree querying the ``k`` smallest pigeons outside ``sigma``, in order.

    Branching on the smaller side (holes) gives the fewest possible leaves,
    ``(n-|sigma|)(n-|sigma|-1)...(n-|sigma|-k+1)``.
    """
    if k < 0 or k + len(sigma) > s.n:
        raise RegimeError(f"pigeon chain of depth {k} over |sigma|={len(sigma)} needs k + |sigma| <= n={s.n}")
    free_p, free_h = _free(sigma, s)
    queried = free_p[:k]

    def build(i: int, used: frozenset[int]) -> Node:
        if i == k:
            return Leaf()
        kids = tuple((h, build(i + 1, used | {h})) for h in free_h if h not in used)
        return PigeonQuery(queried[i], kids)

    return PhpTree(s, sigma, build(0, frozenset()))


def decide_condition_tree(sigma: Condition, tau: Condition, s: Scale) -> PhpTree:
    """A tree all of whose leaves decide every pair of ``tau`` outside ``sigma``.

    For each ``(a, b)`` in ``tau - sigma`` (ascending pigeon) the tree asks
    pigeon ``a``; if ``a`` lands on some other hole, it also asks who takes
    hole ``b``.  Queries already answered by the path are skipped, so every
    leaf contains ``(a, b)`` or both an ``(a, b')`` and an ``(a', b)``.
    """
    if conflicts(sigma, tau):
        raise RegimeError(f"{sigma} and {tau} are incompatible")
    todo = sorted(tau.difference(sigma).pairs)
    if 2 * len(todo) + len(sigma) > s.n:
        raise RegimeError(
            f"deciding {len(todo)} pairs over |sigma|={len(sigma)} needs 2*|tau-sigma| + |sigma| <= n={s.n}"
        )
    free_p, free_h = _free(sigma, s)

    def build(i: int, fwd: dict[int, int], inv: dict[int, int]) -> Node:
        while i < len(todo):
            a, b = todo[i]
            if fwd.get(a) == b or (a in fwd and b in inv):
                i += 1
                continue
            if a in fwd:
                kids = tuple(
                    (p, build(i + 1, {**fwd, p: b}, {**inv, b: p}))
                    for p in free_p
                    if p not in fwd
                )
                return HoleQuery(b, kids)
            after_hit = i + 1 if b in inv else i
            kids = tuple(
                (h, build(i + 1 if h == b else after_hit, {**fwd, a: h}, {**inv, h: a}))
                for h in free_h
                if h not in inv
            )
            return PigeonQuery(a, kids)
        return Leaf()

    return PhpTree(s, sigma, build(0, {}, {}))


def graft(p: PhpTree, attachments: Mapping[Condition, PhpTree]) -> PhpTree:
    """Append ``attachments[label]`` at every leaf of ``p``.

    Each attachment must be rooted at ``p.base | label`` over the same scale.
    Unmarked leaves of an attachment inherit the mark of the leaf they replace.
    """

    def attach(node: Node, path: tuple[tuple[int, int], ...]) -> Node:
        if isinstance(node, Leaf):
            label = Condition(path)
            try:
                sub = attachments[label]
            except KeyError:
                raise GraftError(f"no attachment for leaf {label}") from None
            if sub.scale != p.scale:
                raise GraftError(f"attachment for {label} lives over {sub.scale}, not {p.scale}")
            want = p.base.union(label)
            if sub.base != want:
                raise GraftError(f"attachment for {label} is rooted at {sub.base}, expected {want}")
            return _inherit(sub.root, node.mark)
        kids = tuple((key, attach(child, path + (node.edge(key),))) for key, child in node.children)
        return type(node)(node.pigeon if isinstance(node, PigeonQuery) else node.hole, kids)

    return PhpTree(p.scale, p.base, attach(p.root, ()))


def _inherit(node: Node, mark: bool | None) -> Node:
    if mark is None:
        return node
    if isinstance(node, Leaf):
        return node if node.mark is not None else Leaf(mark)
    kids = tuple((key, _inherit(child, mark)) for key, child in node.children)
    return type(node)(node.pigeon if isinstance(node, PigeonQuery) else node.hole, kids)


def extend_uniform(p: PhpTree, k: int) -> PhpTree:
    """Graft pigeon chains under every leaf so that all leaves sit at depth ``k``."""
    if k + len(p.base) > p.scale.n:
        raise RegimeError(f"uniform depth {k} over |sigma|={len(p.base)} needs k + |sigma| <= n={p.scale.n}")
    labels = [lab for lab, _ in p.walk()]
    deepest = max(len(lab) for lab in labels)
    if deepest > k:
        raise RegimeError(f"tree already has a leaf at depth {deepest} > {k}")
    attachments = {}
    for lab in labels:
        attachments[lab] = pigeon_chain(p.base.union(lab), k - len(lab), p.scale)
    return graft(p, attachments)


def min_leaf_count(n: int, s: int, k: int) -> int:
    """Fewest leaves of a k-uniform tree over a base of size ``s``: (n-s)!/(n-s-k)!."""
    if s < 0 or k < 0 or k > n - s:
        raise RegimeError(f"need 0 <= k <= n - s, got n={n}, s={s}, k={k}")
    return math.perm(n - s, k)


def check_covering(f: LeafFamily, s: Scale) -> bool:
    """Every ``rho <= base`` in ``P(n, K)`` is compatible with some member of ``f``."""
    return covering_witness(f, s) is None


def covering_witness(f: LeafFamily, s: Scale) -> Condition | None:
    """First ``rho <= base`` (canonical order) compatible with no member, or ``None``."""
    by_pigeon: dict[int, int] = {}
    by_hole: dict[int, int] = {}
    by_pair: dict[tuple[int, int], int] = {}
    for i, tau in enumerate(f.leaves):
        for p, h in tau.pairs:
            by_pigeon[p] = by_pigeon.get(p, 0) | 1 << i
            by_hole[h] = by_hole.get(h, 0) | 1 << i
            by_pair[(p, h)] = by_pair.get((p, h), 0) | 1 << i
    everyone = (1 << len(f.leaves)) - 1
    for rho in extensions(f.base, s):
        # members sending a pigeon or hole of rho somewhere else
        clash = 0
        for p, h in rho.pairs:
            clash |= (by_pigeon.get(p, 0) | by_hole.get(h, 0)) & ~by_pair.get((p, h), 0)
        if clash & everyone == everyone:
            return rho
    return None


def validate_tree(t: PhpTree) -> list[str]:
    """Structural problems with ``t``; an empty list means ``t`` is a valid PHP-tree."""
    problems = []
    s, sigma = t.scale, t.base
    if not s.fits(sigma):
        problems.append(f"base {sigma} is outside the universe of {s}")

    def visit(node: Node, fwd: dict[int, int], inv: dict[int, int]):
        if isinstance(node, Leaf):
            return
        keys = [key for key, _ in node.children]
        if len(set(keys)) != len(keys):
            problems.append(f"duplicate child keys {keys}")
        if isinstance(node, PigeonQuery):
            a = node.pigeon
            if a in sigma.domain or a in fwd or not 0 <= a <= s.n:
                problems.append(f"pigeon {a} is not free at path {fwd}")
            want = {h for h in s.holes if h not in sigma.range and h not in inv}
        else:
            b = node.hole
            if b in sigma.range or b in inv or not 0 <= b < s.n:
                problems.append(f"hole {b} is not free at path {fwd}")
            want = {p for p in s.pigeons if p not in sigma.domain and p not in fwd}
        if set(keys) != want:
            problems.append(f"children {sorted(keys)} at path {fwd} should be {sorted(want)}")
        if not want:
            problems.append(f"query with no possible answers at path {fwd}")
        for key, child in node.children:
            a, b = node.edge(key)
            visit(child, {**fwd, a: b}, {**inv, b: a})

    visit(t.root, {}, {})
    return problems


def is_decision_tree_for(t: PhpTree, tau: Condition) -> bool:
    """Leaf condition of a tree that decides ``tau`` relative to the base."""
    todo = tau.difference(t.base).pairs
    for lab, _ in t.walk():
        fwd = lab.as_dict()
        inv = {h: p for p, h in lab.pairs}
        for a, b in todo:
            if fwd.get(a) == b:
                continue
            if a in fwd and b in inv:
                continue
            return False
    return True


# JSON form -----------------------------------------------------------------


def node_to_json(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": True, "mark": node.mark}
    if isinstance(node, PigeonQuery):
        q, idx = "pigeon", node.pigeon
    else:
        q, idx = "hole", node.hole
    return {"q": q, "idx": idx, "children": {str(k): node_to_json(c) for k, c in node.children}}


def node_from_json(obj: dict) -> Node:
    if obj.get("leaf"):
        return Leaf(obj.get("mark"))
    kids = tuple(sorted((int(k), node_from_json(v)) for k, v in obj["children"].items()))
    if obj["q"] == "pigeon":
        return PigeonQuery(int(obj["idx"]), kids)
    if obj["q"] == "hole":
        return HoleQuery(int(obj["idx"]), kids)
    raise ValueError(f"unknown query kind {obj['q']!r}")


def tree_to_json(t: PhpTree) -> dict:
    return {"n": t.scale.n, "K": t.scale.K, "sigma": str(t.base), "root": node_to_json(t.root)}


def tree_from_json(obj: dict) -> PhpTree:
    n = int(obj["n"])
    s = Scale(n, int(obj.get("K", n)))
    return PhpTree(s, Condition.parse(obj.get("sigma", "{}")), node_from_json(obj["root"]))
