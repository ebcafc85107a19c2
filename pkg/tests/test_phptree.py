import json
import random

import pytest

from phplab.conditions import Condition, Scale, conflicts, enumerate_conditions
from phplab.errors import GraftError, RegimeError
from phplab.generators import all_trees, canonical_trees, graft_violations, random_graft_instance
from phplab.phptree import (
    HoleQuery,
    Leaf,
    LeafFamily,
    PhpTree,
    PigeonQuery,
    check_covering,
    covering_witness,
    decide_condition_tree,
    extend_uniform,
    graft,
    is_decision_tree_for,
    leaves,
    min_leaf_count,
    pigeon_chain,
    root_only,
    tree_from_json,
    tree_to_json,
    validate_tree,
)

E = Condition()


def C(*pairs):
    return Condition.of(*pairs)


def labels(t):
    return set(leaves(t).leaves)


def test_root_only_leaves():
    assert labels(root_only(E, Scale(3, 3))) == {E}


def test_pigeon_chain_examples():
    assert labels(pigeon_chain(E, 1, Scale(3, 3))) == {C((0, 0)), C((0, 1)), C((0, 2))}
    assert len(leaves(pigeon_chain(E, 2, Scale(4, 4)))) == 12
    assert labels(pigeon_chain(E, 0, Scale(4, 4))) == {E}
    t = pigeon_chain(C((5, 5)), 1, Scale(6, 6))
    assert len(leaves(t)) == 5
    assert t.root.pigeon == 0


def test_pigeon_chain_regime():
    with pytest.raises(RegimeError):
        pigeon_chain(C((0, 0)), 3, Scale(3, 3))


def test_decide_condition_tree_example():
    t = decide_condition_tree(E, C((0, 0)), Scale(3, 3))
    want = {C((0, 0))} | {C((0, b), (a, 0)) for b in (1, 2) for a in (1, 2, 3)}
    assert labels(t) == want
    assert len(want) == 7
    assert is_decision_tree_for(t, C((0, 0)))


def test_decide_trivial_cases():
    assert labels(decide_condition_tree(E, E, Scale(3, 3))) == {E}
    assert labels(decide_condition_tree(C((0, 0)), C((0, 0)), Scale(3, 3))) == {E}


def test_decide_regime_and_incompatibility():
    with pytest.raises(RegimeError):
        decide_condition_tree(C((0, 0)), C((0, 1)), Scale(3, 3))
    with pytest.raises(RegimeError):
        decide_condition_tree(E, C((0, 0), (1, 1)), Scale(3, 3))


def test_decide_leaf_condition_structural():
    s = Scale(5, 5)
    for tau in [C((0, 0), (1, 1)), C((0, 2), (3, 0)), C((4, 4))]:
        t = decide_condition_tree(E, tau, s)
        assert not validate_tree(t)
        assert len(tau) <= t.depth <= 2 * len(tau)
        for lab in labels(t):
            fwd, inv = lab.as_dict(), {h: p for p, h in lab}
            for a, b in tau:
                assert fwd.get(a) == b or (a in fwd and inv.get(b) not in (None, a))


def test_graft_identity_and_onto_root():
    s = Scale(4, 4)
    p = pigeon_chain(E, 2, s)
    same = graft(p, {lab: root_only(lab, s) for lab in labels(p)})
    assert same == p
    s3 = Scale(3, 3)
    chain = pigeon_chain(E, 1, s3)
    assert graft(root_only(E, s3), {E: chain}) == chain


def test_graft_chain_on_chain():
    s = Scale(4, 4)
    p = pigeon_chain(E, 1, s)
    out = graft(p, {lab: pigeon_chain(lab, 1, s) for lab in labels(p)})
    assert out.is_uniform(2)
    assert len(leaves(out)) == 12


def test_graft_errors():
    s = Scale(4, 4)
    p = pigeon_chain(E, 1, s)
    att = {lab: root_only(lab, s) for lab in labels(p)}
    missing = dict(att)
    missing.pop(C((0, 0)))
    with pytest.raises(GraftError):
        graft(p, missing)
    wrong_base = dict(att)
    wrong_base[C((0, 0))] = root_only(E, s)
    with pytest.raises(GraftError):
        graft(p, wrong_base)
    wrong_scale = dict(att)
    wrong_scale[C((0, 0))] = root_only(C((0, 0)), Scale(4, 2))
    with pytest.raises(GraftError):
        graft(p, wrong_scale)


def test_graft_marks_inherited():
    s = Scale(3, 3)
    p = PhpTree(s, E, PigeonQuery(0, ((0, Leaf(True)), (1, Leaf(False)), (2, Leaf(None)))))
    out = graft(p, {lab: pigeon_chain(lab, 1, s) for lab in labels(p)})
    marks = out.marks()
    assert all(v is True for k, v in marks.items() if (0, 0) in k)
    assert all(v is False for k, v in marks.items() if (0, 1) in k)
    assert all(v is None for k, v in marks.items() if (0, 2) in k)


def test_random_grafts():
    rng = random.Random(11)
    for _ in range(40):
        p, tau, att = random_graft_instance(rng, 5)
        assert graft_violations(p, tau, att) == []


def test_extend_uniform_examples():
    s3 = Scale(3, 3)
    t = extend_uniform(root_only(E, s3), 1)
    assert labels(t) == {C((0, 0)), C((0, 1)), C((0, 2))}
    s4 = Scale(4, 4)
    p = pigeon_chain(E, 2, s4)
    assert extend_uniform(p, 2) == p
    d = extend_uniform(decide_condition_tree(E, C((0, 0)), s4), 2)
    assert d.is_uniform(2)
    assert len(leaves(d)) >= 12
    assert is_decision_tree_for(d, C((0, 0)))
    with pytest.raises(RegimeError):
        extend_uniform(root_only(C((0, 0)), s3), 3)
    with pytest.raises(RegimeError):
        extend_uniform(p, 1)


@pytest.mark.parametrize("args,value", [((4, 0, 2), 12), ((7, 2, 0), 1), ((5, 1, 3), 24)])
def test_min_leaf_count(args, value):
    assert min_leaf_count(*args) == value


def test_min_leaf_count_domain():
    with pytest.raises(RegimeError):
        min_leaf_count(3, 1, 3)


def test_uniform_extension_never_beats_the_minimum():
    s = Scale(5, 5)
    for _, t in canonical_trees(E, s, 3):
        k = t.depth
        u = extend_uniform(t, k)
        assert len(leaves(u)) >= min_leaf_count(5, 0, k)


def test_covering_examples():
    assert check_covering(leaves(pigeon_chain(E, 1, Scale(3, 3))), Scale(3, 1))
    fam = leaves(pigeon_chain(E, 2, Scale(2, 2)))
    assert not check_covering(fam, Scale(2, 1))
    assert covering_witness(fam, Scale(2, 1)) == C((2, 0))
    assert check_covering(LeafFamily((E,)), Scale(3, 2))


def test_all_tiny_trees_valid_and_antichains():
    s = Scale(2, 2)
    count = 0
    for t in all_trees(E, s, 2):
        count += 1
        assert validate_tree(t) == []
        assert leaves(t).is_antichain()
    assert count > 100


def test_validate_tree_catches_problems():
    s = Scale(2, 2)
    bad = PhpTree(s, E, PigeonQuery(0, ((0, Leaf()),)))
    assert validate_tree(bad)
    reused = PhpTree(s, C((0, 0)), PigeonQuery(0, ((1, Leaf()),)))
    assert validate_tree(reused)


def test_json_round_trip():
    s = Scale(4, 3)
    for t in [pigeon_chain(E, 2, s), decide_condition_tree(C((3, 3)), C((0, 0)), s)]:
        doc = json.loads(json.dumps(tree_to_json(t)))
        assert tree_from_json(doc) == t
    t = PhpTree(s, E, HoleQuery(0, tuple((p, Leaf(p % 2 == 0)) for p in range(5))))
    doc = tree_to_json(t)
    assert doc["root"]["q"] == "hole"
    assert doc["root"]["children"]["0"] == {"leaf": True, "mark": True}
    assert tree_from_json(doc) == t


def test_decide_tree_depth_is_twice_the_new_pairs():
    for n in (2, 3, 4):
        s = Scale(n, n)
        for sigma in (E, C((n, n - 1))):
            for tau in enumerate_conditions(s):
                extra = tau.difference(sigma)
                if conflicts(tau, sigma) or 2 * len(extra) + len(sigma) > n:
                    continue
                assert decide_condition_tree(sigma, tau, s).depth == 2 * len(extra)
