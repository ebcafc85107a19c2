import itertools

import pytest

from phplab.conditions import Condition, Scale, conflicts, enumerate_conditions, extensions
from phplab.errors import RegimeError, ShapeError
from phplab.forcing import (
    ForcingContext,
    density_witness,
    forces,
    is_dense,
    is_dense_relative,
    negation_for_forcing,
)
from phplab.formula import And, Atom, ExistsLe, ForallLe, NegAtom, Not, Or, is_sharply_bounded
from phplab.generators import random_formulas
from phplab.parser import parse

E = Condition()
S32 = Scale(3, 2)


def C(*pairs):
    return Condition.of(*pairs)


def F(sigma, text, s=S32):
    return forces(sigma, parse(text), ForcingContext(s))


def test_atomic_clauses():
    assert F(C((0, 0)), "R(0,0)")
    assert F(C((0, 1)), "!R(0,0)")
    assert F(C((1, 0)), "!R(0,0)")
    assert not F(E, "R(0,0)")
    assert not F(E, "!R(0,0)")
    assert not F(E, "!(R(0,0))")


def test_excluded_middle_and_the_horizon():
    # the literal needs an actual conflict; a maximal condition such as
    # 1->1,2->2 has none and cannot be extended, so density fails at K=2
    assert not F(E, "R(0,0) | !R(0,0)")
    assert F(E, "R(0,0) | !(R(0,0))")
    # with K = n every maximal condition fills all holes and so decides the literal
    for n, K, want in [(3, 1, False), (3, 3, True), (4, 2, False), (4, 4, True)]:
        assert F(E, "R(0,0) | !R(0,0)", Scale(n, K)) is want
        assert F(E, "R(0,0) | !(R(0,0))", Scale(n, K))


def test_excluded_middle_literal_exact_pattern():
    s = S32
    ctx = ForcingContext(s)
    f = parse("R(0,0) | !R(0,0)")
    bad = [c for c in enumerate_conditions(s) if not forces(c, f, ctx)]
    # the failures are exactly the conditions that can still reach a maximal
    # condition deciding neither literal
    for c in bad:
        assert any(len(t) == s.K and not conflicts(t, C((0, 0))) and (0, 0) not in t for t in extensions(c, s))


def test_atomic_incompatibility_exhaustive():
    for s in (Scale(2, 1), Scale(2, 2), S32):
        ctx = ForcingContext(s)
        for sigma in enumerate_conditions(s):
            for a, b in itertools.product(range(s.n + 1), range(s.n)):
                want = any((p == a) != (h == b) for p, h in sigma)
                assert forces(sigma, NegAtom(a, b), ctx) == want
                assert forces(sigma, Atom(a, b), ctx) == ((a, b) in sigma)


def test_out_of_universe_atoms():
    assert not F(C((0, 0)), "R(9,0)")
    assert F(E, "!R(9,0)")
    assert F(E, "!R(0,9)")


def test_conjunction_and_universal():
    s = S32
    ctx = ForcingContext(s)
    th = parse("A u <= 1 . !R(u,2)")
    for sigma in enumerate_conditions(s):
        assert forces(sigma, th, ctx) == (forces(sigma, NegAtom(0, 2), ctx) and forces(sigma, NegAtom(1, 2), ctx))


def test_existential_density():
    # at K=2 the maximal 0->1,1->2 leaves hole 0 empty; at K=3 every maximal
    # condition below 0->1 fills hole 0
    assert F(C((0, 1)), "E u <= 3 . R(u,0)") is False
    assert F(C((0, 1)), "E u <= 3 . R(u,0)", Scale(3, 3)) is True
    assert F(C((0, 0)), "E u <= 3 . R(u,0)")


def test_not_requires_sharply_bounded_body():
    with pytest.raises(ShapeError):
        forces(E, Not(ExistsLe("u", 1, Atom("u", 0))), ForcingContext(S32))


def test_rejects_open_formulas_and_outsized_conditions():
    with pytest.raises(ShapeError):
        forces(E, Atom("x", 0), ForcingContext(S32))
    with pytest.raises(RegimeError):
        forces(C((0, 0), (1, 1), (2, 2)), Atom(0, 0), ForcingContext(S32))


def test_trace_records_clause_ids():
    ctx = ForcingContext.tracing(S32)
    forces(E, parse("R(0,0) | !(R(0,0))"), ctx)
    ids = {step[2] for step in ctx.trace}
    assert ids == {"1-atom", "5-not", "6-or"}
    assert ctx.trace[-1] == ("{}", "R(0,0) | !(R(0,0))", "6-or", True)


def test_memo_is_stable():
    ctx = ForcingContext(S32)
    f = parse("E u <= 2 . A v <= 1 . !R(u,v)")
    first = [forces(c, f, ctx) for c in enumerate_conditions(S32)]
    snapshot = dict(ctx.memo)
    second = [forces(c, f, ctx) for c in enumerate_conditions(S32)]
    assert first == second and ctx.memo == snapshot


def defined_on(a):
    return lambda c: a in c.domain


def test_density_examples():
    assert is_dense(lambda c: True, S32)
    assert not is_dense(lambda c: (0, 0) in c, S32)
    assert density_witness(lambda c: (0, 0) in c, E, S32) == C((0, 1))
    # a maximal condition avoiding pigeon 0 blocks every finite D_a
    assert not is_dense(defined_on(0), S32)
    assert density_witness(defined_on(0), E, S32) == C((1, 0), (2, 1))
    assert not is_dense(defined_on(0), Scale(3, 3))
    # below the horizon D_a is met: every condition of size < K extends into it
    s = S32
    assert all(any(0 in t.domain for t in extensions(c, s)) for c in enumerate_conditions(s) if len(c) < s.K)


def test_relative_density_examples():
    s = Scale(4, 2)
    sigma = C((1, 0))
    assert not is_dense_relative(defined_on(0), sigma, s)
    assert density_witness(defined_on(0), sigma, s) == C((1, 0), (2, 1))
    assert is_dense_relative(lambda c: c.issuperset(sigma), sigma, s)
    assert not is_dense_relative(lambda c: conflicts(c, sigma), sigma, s)


def test_negation_for_forcing():
    assert negation_for_forcing(Atom(0, 0)) == NegAtom(0, 0)
    f = ExistsLe("u", 1, ForallLe("v", 1, Atom("u", "v")))
    assert negation_for_forcing(f) == ForallLe("u", 1, Not(ForallLe("v", 1, Atom("u", "v"))))
    with pytest.raises(ShapeError):
        negation_for_forcing(Or(ExistsLe("u", 1, Atom("u", 0)), Atom(0, 0)))


FORMULAS = random_formulas(2024, 250, 3, 3)


def test_generated_formulas_cover_every_connective():
    from phplab.formula import iter_subformulas
    kinds = {type(g) for f in FORMULAS for g in iter_subformulas(f)}
    assert kinds == {Atom, NegAtom, And, Or, Not, ForallLe, ExistsLe}


def test_monotone_and_consistent():
    s = S32
    ctx = ForcingContext(s)
    conds = enumerate_conditions(s)
    for f in FORMULAS:
        val = {c: forces(c, f, ctx) for c in conds}
        for c in conds:
            if val[c]:
                assert all(val[e] for e in extensions(c, s)), (c, f)
                if is_sharply_bounded(f):
                    assert not forces(c, Not(f), ctx)


def test_de_morgan_cross_check():
    s = S32
    ctx = ForcingContext(s)
    sb = [f for f in FORMULAS if is_sharply_bounded(f)]
    for f, g in zip(sb[::2], sb[1::2]):
        lhs = And(f, g)
        rhs = Not(Or(Not(f), Not(g)))
        for c in enumerate_conditions(s):
            assert forces(c, lhs, ctx) == forces(c, rhs, ctx)
            assert forces(c, lhs, ctx) == (forces(c, f, ctx) and forces(c, g, ctx))
