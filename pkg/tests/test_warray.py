import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from phplab.conditions import Condition, Scale, compatible
from phplab.errors import IdentityViolation, PreconditionError, RegimeError
from phplab.phptree import check_covering, leaves, min_leaf_count, pigeon_chain
from phplab.warray import (
    WArray,
    ajtai_check,
    array_from_json,
    array_size,
    array_to_json,
    brute_force_search_array,
    contradiction_check,
    floor_power,
    iroot,
    lower_bound,
    row_uniformization_steps,
    uniformize,
    uniformize_row,
    upper_bound,
    verify_properties,
)

E = Condition()
S82 = Scale(8, 2)


def C(*pairs):
    return Condition.of(*pairs)


def stars(n=8):
    row0 = [C((0, v)) for v in range(n)]
    row1 = [C((1, v)) for v in range(n)]
    return WArray.from_grid([[row0], [row1]], 1, 1, E, Scale(n, 2))


def test_entry_constraints():
    s = Scale(4, 2)
    with pytest.raises(ValueError):
        WArray.from_grid({(0, 0): [C((0, 0), (1, 1))]}, 1, 1, E, s)
    with pytest.raises(ValueError):
        WArray.from_grid({(0, 0): [C((0, 1))]}, 1, 1, C((0, 0)), s)
    with pytest.raises(ValueError):
        WArray.from_grid({(0, 0): [C((0, 0))]}, 1, 1, C((0, 0)), s)
    with pytest.raises(ValueError):
        WArray.from_grid([[[]]], 1, 1, E, s)


def test_empty_grid_fails_covering():
    rep = verify_properties(WArray.empty(1, 1, E, Scale(3, 2)))
    assert rep.p1 and rep.p2 and rep.p3 and not rep.p4
    assert rep.witnesses["p4"] == {"rho": "{}", "row": 0}
    assert array_size(WArray.empty(1, 1, E, Scale(3, 2))) == (0, 0, 0)


def test_duplicate_entry_fails_p1():
    A = WArray.from_grid({(0, 0): [C((0, 0))], (0, 1): [C((0, 0))]}, 2, 1, E, Scale(4, 2))
    rep = verify_properties(A)
    assert not rep.p1
    assert rep.witnesses["p1"]["condition"] == "0->0"
    with pytest.raises(IdentityViolation):
        array_size(A)


def test_star_rows_fail_p2():
    A = stars()
    rep = verify_properties(A)
    assert rep.p1 and rep.p3 and rep.p4 and not rep.p2
    (t1, t2) = (Condition.parse(x) for x in rep.witnesses["p2"]["conditions"])
    assert compatible(t1, t2) and t1 != t2
    assert array_size(A) == (16, 16, 16)
    assert rep.to_json()["witnesses"]["p2"]["column"] == 0


def test_single_entry_size():
    A = WArray.from_grid({(1, 0): [C((0, 0))]}, 1, 1, E, Scale(3, 2))
    assert array_size(A) == (1, 1, 1)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 1), st.integers(0, 4), st.integers(0, 3)), max_size=12))
def test_size_identity_on_random_grids(entries):
    grid = {}
    for a, b, p, h in entries:
        grid.setdefault((a, b), set()).add(C((p, h)))
    A = WArray.from_grid({k: sorted(v) for k, v in grid.items()}, 2, 1, E, Scale(4, 2))
    if verify_properties(A).p1:
        N, rows, cols = array_size(A)
        assert N == rows == cols == sum(len(v) for v in grid.values())
    else:
        with pytest.raises(IdentityViolation):
            array_size(A)


def test_uniformize_row_n8():
    row = leaves(pigeon_chain(E, 1, Scale(8, 8))).leaves
    out = uniformize_row(row, 1, E, S82)
    assert all(len(c) == 2 for c in out)
    assert out.is_antichain()
    assert check_covering(out, S82)
    assert len(out) >= min_leaf_count(8, 0, 2) == 56
    # 7 leaves below 0->0 plus 7 * 8 that send pigeon 0 elsewhere
    assert len(out) == 63
    for rho in out:
        assert sum(1 for pi in row if rho.issuperset(pi)) == 1


def test_uniformize_row_with_base():
    sigma = C((7, 7))
    s = Scale(9, 2)
    row = leaves(pigeon_chain(sigma, 1, Scale(9, 9))).leaves
    out = uniformize_row(row, 1, sigma, s)
    assert {len(c) for c in out} == {2}
    assert len(out) >= min_leaf_count(9, 1, 2)
    for rho in out:
        assert rho.isdisjoint(sigma) and compatible(rho, sigma)
        assert sum(1 for pi in row if rho.issuperset(pi)) == 1
        assert all(rho.issuperset(pi) for pi in row if compatible(pi, rho))


def test_uniformize_row_loop_invariants():
    row = leaves(pigeon_chain(E, 1, Scale(8, 8))).leaves
    for i, (tree, choices) in enumerate(row_uniformization_steps(row, 1, E, S82), 1):
        for rho, _ in tree.walk():
            assert any(compatible(pi, rho) for pi in row)
            for pi in row:
                if compatible(pi, rho) and len(pi) >= i:
                    assert len(pi.intersection(rho)) >= i
        assert set(choices.values()) <= set(row)


def test_uniformize_row_preconditions():
    with pytest.raises(PreconditionError):
        uniformize_row([E], 1, E, S82)
    with pytest.raises(PreconditionError):
        uniformize_row([C((0, 0))], 0, E, S82)
    with pytest.raises(PreconditionError):
        uniformize_row([C((0, 0)), C((1, 1))], 1, E, S82)
    with pytest.raises(PreconditionError):
        uniformize_row([C((0, 0)), C((0, 1))], 1, E, S82)  # not covering
    with pytest.raises(RegimeError):
        uniformize_row(leaves(pigeon_chain(E, 1, Scale(3, 3))).leaves, 1, E, Scale(3, 2))


def test_uniformize_gate():
    with pytest.raises(PreconditionError) as info:
        uniformize(WArray.empty(1, 1, E, S82))
    assert not info.value.report.p4
    with pytest.raises(PreconditionError):
        uniformize(stars())


def test_uniformize_pseudo():
    A = stars()
    B = uniformize(A, pseudo=True)
    assert B.k == 2
    rep = verify_properties(B)
    # rows are processed independently, so clashes across rows survive
    assert rep.p3 and rep.p4 and not rep.p1
    N = sum(len(B.row(a)) for a in range(2))
    assert N == 126 >= 2 * 1 * min_leaf_count(8, 0, 2) == 112
    for a in range(2):
        row = A.row(a)
        for rho in B.row(a):
            assert len(rho) == 2
            assert sum(1 for pi in row if rho.issuperset(pi)) == 1


def test_bounds():
    assert lower_bound(8, 0, 2, 1) == 112
    assert upper_bound(8, 0, 2, 1) == 72
    assert lower_bound(8, 3, 0, 5) == 10
    with pytest.raises(RegimeError):
        lower_bound(3, 0, 4, 1)
    with pytest.raises(RegimeError):
        upper_bound(3, 0, 5, 1)


def test_contradiction_check():
    assert contradiction_check(100, 0, 10) == (True, Fraction(101, 91))
    assert contradiction_check(10, 0, 8) == (False, Fraction(11, 3))
    assert contradiction_check(7, 0, 0) == (True, Fraction(1))
    with pytest.raises(RegimeError):
        contradiction_check(5, 0, 6)


def test_bounds_cross_exactly_at_the_contradiction():
    for n in range(1, 40):
        for s in range(0, 4):
            for k in range(0, n - s + 1):
                flag, _ = contradiction_check(n, s, k)
                assert (lower_bound(n, s, k, 1) > upper_bound(n, s, k, 1)) == flag


def test_ajtai_check():
    assert ajtai_check(10000, 0, 50, Fraction(1, 2)) == (True, Fraction(101, 100), Fraction(10001, 9951))
    assert ajtai_check(16, 0, 8, "1/2") == (False, Fraction(5, 4), Fraction(17, 9))
    flag, lhs, rhs = ajtai_check(50, 0, 0, Fraction(1, 3))
    assert flag and rhs == 1
    with pytest.raises(RegimeError):
        ajtai_check(10, 0, 3, 1)


def test_integer_roots():
    for x in range(0, 2000):
        assert iroot(x, 2) == math.isqrt(x)
        r = iroot(x, 3)
        assert r ** 3 <= x < (r + 1) ** 3
    big = 10 ** 60 + 12345
    r = iroot(big, 7)
    assert r ** 7 <= big < (r + 1) ** 7
    assert floor_power(10000, Fraction(1, 2)) == 100
    assert floor_power(99, Fraction(1, 2)) == 9
    assert floor_power(8, Fraction(2, 3)) == 4


@pytest.mark.parametrize("n,K,m,k", [(3, 2, 1, 1), (4, 2, 1, 1), (3, 3, 1, 2), (3, 2, 2, 1)])
def test_search_finds_nothing(n, K, m, k):
    assert brute_force_search_array(Scale(n, K), m, k) is None


def test_search_degenerate_k0():
    assert brute_force_search_array(Scale(3, 2), 1, 0) is None


def test_search_budget(monkeypatch):
    from phplab.errors import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        brute_force_search_array(Scale(4, 2), 2, 1, budget=5)
    monkeypatch.setenv("LAB_BUDGET_NODES", "5")
    with pytest.raises(BudgetExceeded):
        brute_force_search_array(Scale(4, 2), 2, 1)


def test_json_round_trip():
    A = stars()
    doc = json.loads(json.dumps(array_to_json(A)))
    assert doc["cells"][1][0][:2] == ["1->0", "1->1"]
    assert array_from_json(doc) == A
    del doc["K"]
    assert array_from_json(doc, K=2) == A
