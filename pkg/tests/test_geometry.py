"""g/c/d-vectors, dual bases, the fan and the associahedron."""

import pytest

from nonkissing.errors import NotClosed
from nonkissing.facets import enumerate_facets, peak_facet
from nonkissing.families import a_path, cycle_quiver, loop_quiver, reversed_path
from nonkissing.geometry import (
    build_associahedron,
    build_fan,
    c_vector,
    d_vector,
    dual_basis_check,
    facet_matrices,
    g_vector,
    sign_coherence_report,
    vec_dot,
)
from nonkissing.quiver import blossom
from nonkissing.walks import (
    deep_walk,
    enumerate_walks,
    peak_walk,
    straight_walks,
)


def test_straight_walks_have_zero_g_vector():
    for q in (a_path(2), loop_quiver(), reversed_path(2)):
        bq = blossom(q)
        for w in straight_walks(bq):
            assert g_vector(bq, w) == (0,) * len(q.vertices)


def test_peak_walk_g_vector_is_basis_vector():
    for q in (a_path(2), a_path(3), loop_quiver()):
        bq = blossom(q)
        for i, v in enumerate(q.vertices):
            g = g_vector(bq, peak_walk(bq, v))
            assert g == tuple(1 if j == i else 0 for j in range(len(q.vertices)))


def test_paper_example_matrices_pass_fixture_checks():
    # the published g-, c-, d-matrices of a two-vertex facet, used as a
    # matrix-level fixture: columns pair into dual bases and are sign-coherent
    G = [(1, -1), (0, -1)]
    C = [(1, 0), (-1, -1)]
    D = [(1, 0), (0, -1)]
    for i in range(2):
        for j in range(2):
            assert vec_dot(G[i], C[j]) == (1 if i == j else 0)
    for row in range(2):
        coords = [G[col][row] for col in range(2)]
        nonzero = {x > 0 for x in coords if x != 0}
        assert len(nonzero) <= 1
    for col in (*C, *D):
        assert not (any(x > 0 for x in col) and any(x < 0 for x in col))


def test_peak_facet_c_vectors_are_positive_basis():
    for q in (a_path(2), a_path(3)):
        bq = blossom(q)
        facet = peak_facet(bq)
        for i, v in enumerate(q.vertices):
            c = c_vector(bq, facet, peak_walk(bq, v))
            assert c == tuple(1 if j == i else 0 for j in range(len(q.vertices)))


def test_dual_basis_identity_everywhere():
    for q in (a_path(2), a_path(3), loop_quiver(), reversed_path(2), cycle_quiver(2)):
        bq = blossom(q)
        g = enumerate_facets(q)
        for facet in g.facets:
            assert dual_basis_check(bq, facet) == []


def test_c_vector_rejects_straight_walks():
    from nonkissing.errors import NotBending

    bq = blossom(a_path(2))
    facet = peak_facet(bq)
    with pytest.raises(NotBending):
        c_vector(bq, facet, facet.straights[0])


def test_deep_walk_d_vector_is_negative_basis():
    for q in (a_path(2), a_path(3), loop_quiver()):
        bq = blossom(q)
        for i, v in enumerate(q.vertices):
            d = d_vector(bq, deep_walk(bq, v))
            assert d == tuple(-1 if j == i else 0 for j in range(len(q.vertices)))


def test_a2_d_vectors_are_cluster_denominators():
    # frozen from direct kiss computation: the five bending walks carry the
    # classical A2 denominator vectors
    q = a_path(2)
    bq = blossom(q)
    g = enumerate_facets(q)
    walks = {w for f in g.facets for w in f.bending}
    ds = sorted(d_vector(bq, w) for w in walks)
    assert ds == [(-1, 0), (0, -1), (0, 1), (1, 0), (1, 1)]


def test_loop_peak_d_vector_is_positive_basis():
    bq = blossom(loop_quiver())
    assert d_vector(bq, peak_walk(bq, "v1")) == (1,)


def test_sign_coherence_on_corpus():
    for q in (a_path(2), a_path(3), loop_quiver(), reversed_path(2), cycle_quiver(2)):
        bq = blossom(q)
        g = enumerate_facets(q)
        assert sign_coherence_report(bq, g) == []


def test_fan_a2_five_cones_complete():
    q = a_path(2)
    g = enumerate_facets(q)
    fan = build_fan(g)
    assert len(fan.cones) == 5
    assert fan.report == ()
    rays = {r for cone in fan.cones for r in cone.rays}
    assert rays == {(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)}


def test_fan_loop_two_halflines():
    g = enumerate_facets(loop_quiver())
    fan = build_fan(g)
    assert sorted(cone.rays for cone in fan.cones) == [((-1,),), ((1,),)]
    assert fan.report == ()


def test_fan_needs_closed_graph():
    g = enumerate_facets(a_path(3), max_facets=3)
    with pytest.raises(NotClosed):
        build_fan(g)


def test_g_vectors_sign_coherent_per_facet():
    q = a_path(3)
    bq = blossom(q)
    g = enumerate_facets(q)
    for facet in g.facets:
        _, gs, _ = facet_matrices(bq, facet)
        for k in range(3):
            signs = {x[k] > 0 for x in gs if x[k] != 0}
            assert len(signs) <= 1


def _polytope(q):
    bq = blossom(q)
    g = enumerate_facets(q)
    universe, complete = enumerate_walks(bq)
    return bq, g, universe, build_associahedron(q, g, universe, complete)


def test_a2_associahedron_is_a_pentagon():
    bq, g, universe, poly = _polytope(a_path(2))
    verts = {tuple(int(x) for x in v) for v in poly.vertices}
    assert verts == {(2, 2), (-2, 2), (2, 0), (-2, -2), (0, -2)}
    assert len(poly.defining) == 5
    # straight walks contribute the trivial halfspace and are dropped
    zero = [(n, b) for n, b in poly.halfspaces if all(x == 0 for x in n)]
    assert zero and all(b == 0 for _, b in zero)
    assert all(any(x != 0 for x in n) for n, _ in poly.defining)


def test_loop_associahedron_is_a_segment():
    bq, g, universe, poly = _polytope(loop_quiver())
    verts = sorted(tuple(int(x) for x in v) for v in poly.vertices)
    assert verts == [(-2,), (2,)]
    assert sorted(poly.defining) == [((-1,), 2), ((1,), 2)]


def test_polytope_vertices_lie_on_their_facet_bounds():
    for q in (a_path(2), loop_quiver(), reversed_path(2)):
        bq, g, universe, poly = _polytope(q)
        from nonkissing.walks import total_kissing_number

        for i, facet in enumerate(g.facets):
            for w in facet.walks:
                bound = total_kissing_number(bq, w, universe)
                assert vec_dot(g_vector(bq, w), poly.vertices[i]) == bound


def test_polytope_needs_complete_universe():
    from nonkissing.errors import IncompleteUniverse

    q = a_path(2)
    bq = blossom(q)
    g = enumerate_facets(q)
    universe, _ = enumerate_walks(bq)
    with pytest.raises(IncompleteUniverse):
        build_associahedron(q, g, universe, complete=False)
