"""Validation, blossoming, pruning and Koszul duality."""

import random

import pytest

from nonkissing.errors import (
    DegreeViolation,
    GentleBranchViolation,
    NonComposableRelation,
    NotComplete,
    ParseError,
)
from nonkissing.families import (
    a_path,
    corpus,
    double_cycle,
    loop_quiver,
    random_locally_gentle,
    reversed_path,
)
from nonkissing.quiver import (
    blossom,
    is_isomorphic,
    koszul_dual,
    make_quiver,
    prune,
    quiver_from_json,
    validate_locally_gentle,
)

from oracles import vf2_isomorphic


def test_a2_is_valid():
    q = make_quiver(["1", "2"], [("a", "1", "2")])
    validate_locally_gentle(q)


def test_single_loop_is_valid():
    q = make_quiver(["1"], [("a", "1", "1")])
    validate_locally_gentle(q)


def test_three_outgoing_arrows_rejected():
    with pytest.raises(DegreeViolation):
        make_quiver(
            ["1", "2"],
            [("a", "1", "2"), ("b", "1", "2"), ("c", "1", "1")],
        )


def test_non_composable_relation_rejected():
    with pytest.raises(NonComposableRelation):
        make_quiver(
            ["1", "2", "3"],
            [("a", "1", "2"), ("b", "1", "3")],
            [("a", "b")],
        )


def test_two_relation_free_successors_rejected():
    # b has two relation-free successors c and d
    with pytest.raises(GentleBranchViolation):
        make_quiver(
            ["1", "2", "3", "4"],
            [("b", "1", "2"), ("c", "2", "3"), ("d", "2", "4")],
        )


def test_blossom_sizes_a2():
    bq = blossom(a_path(2))
    assert len(bq.quiver.vertices) == 8
    assert len(bq.quiver.arrows) == 7


def test_blossom_sizes_loop():
    bq = blossom(loop_quiver())
    assert len(bq.quiver.vertices) == 3
    assert len(bq.quiver.arrows) == 3


def test_double_cycle_has_no_blossoms():
    bq = blossom(double_cycle(3))
    assert not bq.blossom_vertices
    assert not bq.blossom_arrows


def test_blossom_is_complete_and_prunes_back():
    for q in corpus().values():
        bq = blossom(q)
        for v in bq.quiver.vertices:
            assert bq.quiver.degree(v) in (1, 4)
        assert prune(bq.quiver) == q


def test_prune_rejects_incomplete():
    # the middle vertex of the path on 3 vertices has total degree 2
    with pytest.raises(NotComplete):
        prune(a_path(3))


def test_prune_of_leafless_complete_quiver_is_identity():
    q = double_cycle(2)
    assert prune(q) == q


def test_koszul_dual_involution():
    for q in corpus().values():
        assert is_isomorphic(koszul_dual(koszul_dual(q)), q)


def test_koszul_dual_of_free_loop_gains_relation():
    dual = koszul_dual(loop_quiver())
    assert ("a1", "a1") in dual.relations


def test_koszul_commutes_with_blossom():
    for name, q in corpus().items():
        b1 = blossom(koszul_dual(q)).quiver
        b2 = koszul_dual(blossom(q).quiver)
        assert is_isomorphic(b1, b2), name


def test_blossom_relation_slots():
    # every arrow of a blossoming has exactly one relation partner and one
    # relation-free partner on each interior side
    for q in corpus().values():
        bq = blossom(q)
        quiv = bq.quiver
        for b in quiv.arrow_ids:
            preds = quiv.arrows_in[quiv.src[b]]
            if preds:
                assert sum((a, b) in quiv.relations for a in preds) == 1
                assert sum((a, b) not in quiv.relations for a in preds) == 1


def test_json_roundtrip_byte_stable():
    q = reversed_path(3)
    text = q.to_json()
    assert quiver_from_json(text).to_json() == text


def test_json_unknown_field_rejected():
    with pytest.raises(ParseError):
        quiver_from_json('{"vertices": [], "arrows": [], "bogus": 1}')


def test_json_bad_ids_rejected():
    with pytest.raises(ParseError):
        quiver_from_json('{"vertices": ["a b"], "arrows": []}')


def test_isomorphism_invariant_under_relabeling():
    q1 = make_quiver(["x", "y"], [("e", "x", "y")])
    q2 = make_quiver(["p", "q"], [("f", "p", "q")])
    assert is_isomorphic(q1, q2)


def test_isomorphism_sees_relations():
    l1 = make_quiver(["v"], [("a", "v", "v")], [])
    l2 = make_quiver(["v"], [("a", "v", "v")], [("a", "a")])
    assert not is_isomorphic(l1, l2)


def test_isomorphism_agrees_with_vf2_oracle():
    rng = random.Random(7)
    quivers = [random_locally_gentle(rng, 5) for _ in range(12)]
    quivers += [a_path(3), loop_quiver(), reversed_path(2), double_cycle(2)]
    for i, qa in enumerate(quivers):
        for qb in quivers[i:]:
            assert is_isomorphic(qa, qb) == vf2_isomorphic(qa, qb)


def test_random_generator_produces_valid_quivers():
    rng = random.Random(99)
    for _ in range(30):
        validate_locally_gentle(random_locally_gentle(rng))
