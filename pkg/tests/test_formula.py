import random

import pytest
from hypothesis import given, settings, strategies as st

from phplab.errors import BudgetExceeded, FormulaSyntaxError, NegativeBoundError, UnboundVariableError
from phplab.formula import (
    And,
    Atom,
    ExistsLe,
    ForallLe,
    NegAtom,
    Not,
    Or,
    Shape,
    classify,
    depth,
    formula_php_clauses,
    free_vars,
    instantiate,
    is_closed,
    make_php_instance,
    negate,
    substitute,
)
from phplab.generators import random_formula
from phplab.parser import parse, to_text


def test_parse_examples():
    assert parse("R(0,0)") == Atom(0, 0)
    assert parse("E u <= 1 . R(u,0)") == ExistsLe("u", 1, Atom("u", 0))
    assert parse("!(R(0,0) & R(1,1))") == Not(And(Atom(0, 0), Atom(1, 1)))


def test_literal_versus_negation_node():
    assert parse("!R(0,1)") == NegAtom(0, 1)
    assert parse("!(R(0,1))") == Not(Atom(0, 1))
    assert parse("!!R(0,1)") == Not(NegAtom(0, 1))


def test_precedence_and_associativity():
    assert parse("R(0,0) | R(1,1) & R(2,2)") == Or(Atom(0, 0), And(Atom(1, 1), Atom(2, 2)))
    assert parse("R(0,0) & R(1,1) & R(2,2)") == And(And(Atom(0, 0), Atom(1, 1)), Atom(2, 2))
    # a quantifier body is a single unary formula
    assert parse("A u <= 1 . R(u,0) | R(2,2)") == Or(ForallLe("u", 1, Atom("u", 0)), Atom(2, 2))


def test_whitespace_insensitive():
    assert parse("  E u<=1.\n  R( u , 0 )") == ExistsLe("u", 1, Atom("u", 0))


def test_syntax_error_positions():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("R(0,0) &\n  & R(1,1)")
    assert (info.value.line, info.value.column) == (2, 3)
    with pytest.raises(FormulaSyntaxError) as info:
        parse("R(0,0")
    assert "end of input" in str(info.value)
    with pytest.raises(FormulaSyntaxError):
        parse("R(0,0) $")


def test_unbound_and_negative():
    with pytest.raises(UnboundVariableError):
        parse("R(x,0)")
    assert parse("R(x,y)", free=("x", "y")) == Atom("x", "y")
    with pytest.raises(NegativeBoundError):
        ForallLe("u", -1, Atom("u", 0))
    with pytest.raises(FormulaSyntaxError):
        parse("A u <= -1 . R(u,0)")


def test_positions_do_not_affect_equality():
    f = parse("R(0,0) | R(1,1)")
    assert f.pos == (1, 8)
    assert f == Or(Atom(0, 0), Atom(1, 1))


@pytest.mark.parametrize("f,shape", [
    (Atom(0, 0), Shape.ATOMIC),
    (ForallLe("u", 2, Or(Atom("u", 0), NegAtom("u", 1))), Shape.SHARPLY_BOUNDED),
    (ExistsLe("u", 2, ForallLe("v", 1, Atom("u", "v"))), Shape.EXISTENTIAL_PREFIX),
    (Or(ExistsLe("u", 1, Atom("u", 0)), Atom(0, 0)), Shape.GENERAL),
    (Not(ExistsLe("u", 1, Atom("u", 0))), Shape.GENERAL),
    (ForallLe("v", 1, ExistsLe("u", 1, Atom("u", "v"))), Shape.SHARPLY_BOUNDED),
])
def test_classify(f, shape):
    assert classify(f) is shape


def test_substitute_examples():
    assert substitute(Atom("x", 0), "x", 2) == Atom(2, 0)
    assert substitute(ExistsLe("u", 1, Atom("u", "y")), "y", 0) == ExistsLe("u", 1, Atom("u", 0))
    assert substitute(Atom(0, 0), "x", 5) == Atom(0, 0)
    # bound occurrences are left alone
    assert substitute(ExistsLe("x", 1, Atom("x", 0)), "x", 3) == ExistsLe("x", 1, Atom("x", 0))
    f = instantiate(parse("R(x,y) & !R(y,x)", free="xy"), x=1, y=2)
    assert f == And(Atom(1, 2), NegAtom(2, 1)) and is_closed(f)


def test_free_vars():
    assert free_vars(parse("E u <= 1 . R(u,y)", free="y")) == {"y"}


def test_negate_involution_and_shape():
    rng = random.Random(5)
    for _ in range(200):
        f = random_formula(rng, 3, 3)
        g = negate(f)
        if not any(isinstance(x, Not) for x in _walk(f)):
            assert negate(g) == f


def _walk(f):
    from phplab.formula import iter_subformulas
    return list(iter_subformulas(f))


def test_php_instance_plain_2_1():
    f = make_php_instance("plain", 2, 1)
    assert f == Or(
        ExistsLe("a", 1, ForallLe("b", 0, NegAtom("a", "b"))),
        And(Atom(0, 0), Atom(1, 0)),
    )


def test_php_instance_onto_1_1():
    f = make_php_instance("onto", 1, 1)
    assert f == Or(
        ExistsLe("a", 0, ForallLe("b", 0, NegAtom("a", "b"))),
        ExistsLe("b", 0, ForallLe("a", 0, NegAtom("a", "b"))),
    )


def test_php_instance_weak():
    assert make_php_instance("weak", n_holes=1) == make_php_instance("plain", 2, 1)
    with pytest.raises(ValueError):
        make_php_instance("weak", 3, 1)
    with pytest.raises(BudgetExceeded):
        make_php_instance("plain", 60, 50, budget=1000)
    with pytest.raises(ValueError):
        make_php_instance("sideways", 2, 1)


def test_formula_php_clauses_counts():
    pc, hc, rows = formula_php_clauses(Atom("x", "y"), 4, 2)
    assert len(pc) == 6 * 2 and len(hc) == 4 * 1 and len(rows) == 4
    assert rows[3] == (3, [Atom(3, 0), Atom(3, 1)])


def test_round_trip_seeded():
    rng = random.Random(2)
    for _ in range(500):
        f = random_formula(rng, 5, 4, bound_max=3)
        assert parse(to_text(f)) == f
        assert depth(f) <= 5


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_property(seed):
    f = random_formula(random.Random(seed), 5, 3)
    text = to_text(f)
    assert parse(text) == f
    assert to_text(parse(text)) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_classify_monotone_under_substitution(seed, value):
    f = random_formula(random.Random(seed), 3, 3, scope=("x",))
    g = substitute(f, "x", value)
    assert is_closed(g)
    assert classify(g) <= classify(f)
