"""Seeded generators of trees, graft instances and formulas for exhaustive and randomized checks."""
from __future__ import annotations

import random
from typing import Iterator

from .conditions import Condition, Scale, compatible, enumerate_conditions
from .errors import RegimeError
from .formula import And, Atom, ExistsLe, ForallLe, Formula, NegAtom, Not, Or, is_sharply_bounded
from .phptree import (
    HoleQuery,
    Leaf,
    Node,
    PhpTree,
    PigeonQuery,
    decide_condition_tree,
    extend_uniform,
    graft,
    is_decision_tree_for,
    pigeon_chain,
    root_only,
    validate_tree,
)


def canonical_trees(sigma: Condition, s: Scale, max_depth: int) -> Iterator[tuple[str, PhpTree]]:
    """Every pigeon chain and every condition-deciding tree over ``sigma`` of depth <= ``max_depth``.

    Deciding trees range over all ``tau`` compatible with ``sigma`` in ``P(n, n)``
    with at most ``max_depth`` new pairs, plus their uniform extensions.
    Yields ``(description, tree)``.
    """
    for k in range(max_depth + 1):
        if k + len(sigma) <= s.n:
            yield f"chain k={k}", pigeon_chain(sigma, k, s)
    full = Scale(s.n, s.n)
    seen = set()
    for tau in enumerate_conditions(full):
        extra = tau.difference(sigma)
        # inside its regime a deciding tree has depth exactly 2 * |tau - sigma|
        if not extra or 2 * len(extra) > max_depth or not compatible(tau, sigma):
            continue
        extra_key = extra
        if extra_key in seen:
            continue
        seen.add(extra_key)
        try:
            t = decide_condition_tree(sigma, extra, s)
        except RegimeError:
            continue
        if t.depth <= max_depth:
            yield f"decide {extra}", t
            for k in range(t.depth + 1, max_depth + 1):
                if k + len(sigma) <= s.n:
                    yield f"decide {extra} padded to {k}", extend_uniform(t, k)


def all_trees(sigma: Condition, s: Scale, max_depth: int) -> Iterator[PhpTree]:
    """Every PHP-tree over ``sigma`` of depth <= ``max_depth``; only feasible for tiny ``n``."""

    def nodes(fwd: dict, inv: dict, d: int) -> Iterator[Node]:
        yield Leaf()
        if d == 0:
            return
        used_p = set(sigma.domain) | set(fwd)
        used_h = set(sigma.range) | set(inv)
        free_p = [p for p in s.pigeons if p not in used_p]
        free_h = [h for h in s.holes if h not in used_h]
        if not free_p or not free_h:
            return
        for a in free_p:
            options = [[(h, c) for c in nodes({**fwd, a: h}, {**inv, h: a}, d - 1)] for h in free_h]
            for combo in _product(options):
                yield PigeonQuery(a, tuple(combo))
        for b in free_h:
            options = [[(p, c) for c in nodes({**fwd, p: b}, {**inv, b: p}, d - 1)] for p in free_p]
            for combo in _product(options):
                yield HoleQuery(b, tuple(combo))

    for root in nodes({}, {}, max_depth):
        yield PhpTree(s, sigma, root)


def _product(options):
    if not options:
        yield []
        return
    for head in options[0]:
        for rest in _product(options[1:]):
            yield [head, *rest]


# grafting ---------------------------------------------------------------------


def random_condition(rng: random.Random, s: Scale, size: int, avoid: Condition = Condition()) -> Condition:
    """A uniformly built random condition of ``size`` new pairs compatible with ``avoid``."""
    pigeons = [p for p in s.pigeons if p not in avoid.domain]
    holes = [h for h in s.holes if h not in avoid.range]
    size = min(size, len(pigeons), len(holes))
    return Condition(tuple(zip(rng.sample(pigeons, size), rng.sample(holes, size))))


def random_graft_instance(rng: random.Random, n_max: int = 6):
    """``(p, tau, attachments)`` with ``p`` deciding ``tau`` and one attachment per leaf."""
    while True:
        n = rng.randint(2, n_max)
        s = Scale(n, n)
        sigma = random_condition(rng, s, rng.randint(0, 1))
        tau = random_condition(rng, s, rng.randint(0, 1), sigma)
        try:
            p = decide_condition_tree(sigma, tau, s)
        except RegimeError:
            continue
        attachments = {}
        for lab, _ in p.walk():
            below = sigma.union(lab)
            kind = rng.choice(["root", "chain", "decide"])
            try:
                if kind == "chain":
                    sub = pigeon_chain(below, rng.randint(1, 2), s)
                elif kind == "decide":
                    sub = decide_condition_tree(below, random_condition(rng, s, 1, below), s)
                else:
                    sub = root_only(below, s)
            except RegimeError:
                sub = root_only(below, s)
            attachments[lab] = sub
        return p, tau, attachments


def graft_violations(p: PhpTree, tau: Condition, attachments) -> list[str]:
    """Problems with ``graft(p, attachments)``: validity, unique path extension, ``tau`` still decided."""
    out = graft(p, attachments)
    problems = validate_tree(out)
    base_labels = [lab for lab, _ in p.walk()]
    for lab, _ in out.walk():
        parents = [b for b in base_labels if lab.issuperset(b)]
        if len(parents) != 1:
            problems.append(f"leaf {lab} extends {len(parents)} leaves of the base tree")
    if is_decision_tree_for(p, tau) and not is_decision_tree_for(out, tau):
        problems.append(f"grafted tree no longer decides {tau}")
    return problems


# formulas ---------------------------------------------------------------------


def random_formula(rng: random.Random, max_depth: int, n: int, bound_max: int = 2,
                   scope: tuple[str, ...] = ()) -> Formula:
    """A random closed formula of depth <= ``max_depth`` over pigeons ``0..n`` and holes ``0..n-1``.

    Negations are only placed over sharply bounded bodies, so every output is
    a legal input for :func:`phplab.forcing.forces`.
    """

    def term(limit):
        if scope and rng.random() < 0.5:
            return rng.choice(scope)
        return rng.randint(0, limit)

    if max_depth == 0 or rng.random() < 0.25:
        cls = rng.choice([Atom, NegAtom])
        return cls(term(n), term(n - 1))
    kind = rng.choice(["and", "or", "not", "forall", "exists"])
    if kind in ("and", "or"):
        left = random_formula(rng, max_depth - 1, n, bound_max, scope)
        right = random_formula(rng, max_depth - 1, n, bound_max, scope)
        return And(left, right) if kind == "and" else Or(left, right)
    if kind == "not":
        body = random_formula(rng, max_depth - 1, n, bound_max, scope)
        if not is_sharply_bounded(body):
            body = Atom(term(n), term(n - 1))
        return Not(body)
    var = f"v{len(scope)}"
    body = random_formula(rng, max_depth - 1, n, bound_max, scope + (var,))
    cls = ForallLe if kind == "forall" else ExistsLe
    return cls(var, rng.randint(0, bound_max), body)


def random_formulas(seed: int, count: int, max_depth: int, n: int, bound_max: int = 2) -> list[Formula]:
    """``count`` distinct random closed formulas, reproducible from ``seed``."""
    rng = random.Random(seed)
    out, seen = [], set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError(f"could only generate {len(out)} distinct formulas")
        f = random_formula(rng, max_depth, n, bound_max)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out
