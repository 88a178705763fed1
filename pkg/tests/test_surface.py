"""Surface construction, invariants, round trips and the curve dictionary."""

import itertools

import pytest

from nonkissing.errors import (
    DifferentSurface,
    MissingDualPoint,
    MultipleDualPoints,
    NotReducedCrossing,
)
from nonkissing.families import (
    a_path,
    cambrian,
    corpus,
    cycle_quiver,
    double_cycle,
    double_path,
    loop_quiver,
    reversed_path,
)
from nonkissing.quiver import blossom, is_isomorphic, koszul_dual
from nonkissing.surface import (
    CrossingSequence,
    GreenView,
    crossing_count,
    curve_of_walk,
    dual_dissection,
    quiver_from_surface,
    strip_dual,
    surface_dump,
    surface_from_quiver,
    surface_invariants,
    surfaces_isomorphic,
    swap_dissections,
    walk_of_curve,
)
from nonkissing.walks import (
    enumerate_walks,
    kn_pair,
    peak_walk,
    primitive_cycles,
    straight_walks,
)

# (quiver, b, punctures, genus), straight from the worked example families
INVARIANT_TABLE = [
    (a_path(2), 1, 0, 0),
    (a_path(5), 1, 0, 0),
    (cambrian("FRRF"), 1, 0, 0),
    (reversed_path(2), 1, 1, 0),
    (reversed_path(3), 1, 2, 0),
    (reversed_path(4), 1, 3, 0),
    (double_path(2), 2, 0, 0),
    (double_path(3), 1, 0, 1),
    (double_path(4), 2, 0, 1),
    (double_path(5), 1, 0, 2),
    (loop_quiver(), 1, 1, 0),
    (cycle_quiver(2), 1, 1, 0),
    (cycle_quiver(3), 1, 1, 0),
    (cycle_quiver(4), 1, 1, 0),
    (double_cycle(1), 0, 3, 0),
    (double_cycle(2), 0, 4, 0),
    (double_cycle(3), 0, 3, 1),
    (double_cycle(4), 0, 4, 1),
    (double_cycle(5), 0, 3, 2),
]


def test_invariant_table():
    for q, b, punctures, genus in INVARIANT_TABLE:
        inv = surface_invariants(surface_from_quiver(q))
        assert (inv["b"], inv["punctures"], inv["genus"]) == (b, punctures, genus)


def test_reversed_path_puncture_split():
    for n in (2, 3, 4):
        inv = surface_invariants(surface_from_quiver(reversed_path(n)))
        assert inv["p"] == 0
        assert inv["p_dual"] == n - 1


def test_v_point_count_matches_straight_walks():
    for q in corpus().values():
        bq = blossom(q)
        s = surface_from_quiver(q)
        p = len(primitive_cycles(bq))
        n0, n1 = len(q.vertices), len(q.arrows)
        assert len(s.green_classes()) == 2 * n0 - n1 + p


def test_dissection_face_count_is_b_plus_dual_punctures():
    # faces of the dissection after filling boundary circles with disks:
    # red stars touching one boundary circle merge through its filling disk
    from nonkissing.surface import start_corner

    for q in corpus().values():
        s = surface_from_quiver(q)
        inv = surface_invariants(s)
        interior = sum(1 for r in s.red_classes() if s.is_puncture(r))
        filled_faces = interior + len(s.boundary_cycles())
        assert filled_faces == inv["b"] + inv["p_dual"]
        # and every boundary circle carries at least one red point
        for cyc in s.boundary_cycles():
            kinds = {
                s.class_type[s.corner_class[start_corner(h)]] for h in cyc
            }
            assert "red" in kinds


def test_boundary_alternation():
    # along every boundary cycle, blossom points alternate with marked points
    # and the marked points alternate green/red
    for q in corpus().values():
        s = surface_from_quiver(q)
        from nonkissing.surface import start_corner

        for cyc in s.boundary_cycles():
            kinds = []
            for h in cyc:
                root = s.corner_class[start_corner(h)]
                typ = s.class_type[root]
                if typ == "black":
                    kinds.append("B")
                else:
                    kinds.append("V" if typ == "green" else "F")
            n = len(kinds)
            for i, k in enumerate(kinds):
                if k == "B":
                    assert kinds[(i + 1) % n] in ("V", "F")
                else:
                    assert kinds[(i + 1) % n] == "B"
                if k == "V":
                    assert kinds[(i + 2) % n] == "F"


def test_quiver_roundtrip_on_corpus():
    for name, q in corpus().items():
        s = surface_from_quiver(q)
        assert is_isomorphic(quiver_from_surface(s, "primary"), q), name
        assert is_isomorphic(quiver_from_surface(s, "dual"), koszul_dual(q)), name


def test_swap_equals_dual_surface():
    for name, q in corpus().items():
        s = surface_from_quiver(q)
        sk = surface_from_quiver(koszul_dual(q))
        assert surfaces_isomorphic(swap_dissections(s), sk), name


def test_dual_dissection_reconstruction():
    for name, q in corpus().items():
        s = surface_from_quiver(q)
        rebuilt = dual_dissection(strip_dual(s))
        assert surfaces_isomorphic(s, rebuilt), name


def test_dual_dissection_rejects_bad_mark_counts():
    s = surface_from_quiver(a_path(2))
    view = strip_dual(s)
    zero = GreenView(view.faces, view.closed, (0,) + view.marks[1:], view.pairs)
    with pytest.raises(MissingDualPoint):
        dual_dissection(zero)
    two = GreenView(view.faces, view.closed, (2,) + view.marks[1:], view.pairs)
    with pytest.raises(MultipleDualPoints):
        dual_dissection(two)


def test_triangle_face_reconstruction_detail():
    # a face with a boundary red point: the rebuilt star joins it to every
    # green side of the face, one quad per corner unit
    s = surface_from_quiver(a_path(2))
    view = strip_dual(s)
    rebuilt = dual_dissection(view)
    assert len(rebuilt.quads) == len(s.quads)
    assert sorted(map(len, rebuilt.class_corners.values())) == sorted(
        map(len, s.class_corners.values())
    )


CURVE_INSTANCES = [a_path(2), a_path(3), loop_quiver(), cycle_quiver(2), reversed_path(2)]


def test_curve_walk_bijection():
    for q in CURVE_INSTANCES:
        bq = blossom(q)
        walks, complete = enumerate_walks(bq)
        assert complete
        for w in walks:
            assert walk_of_curve(bq, curve_of_walk(bq, w)) == w


def test_crossing_count_equals_kissing_number():
    for q in CURVE_INSTANCES:
        bq = blossom(q)
        walks, _ = enumerate_walks(bq)
        curves = {w: curve_of_walk(bq, w) for w in walks}
        for w1, w2 in itertools.product(walks, repeat=2):
            assert crossing_count(bq, curves[w1], curves[w2]) == kn_pair(bq, w1, w2)


def test_straight_curves_never_cross():
    for q in CURVE_INSTANCES:
        bq = blossom(q)
        for w1 in straight_walks(bq):
            for w2 in straight_walks(bq):
                c1, c2 = curve_of_walk(bq, w1), curve_of_walk(bq, w2)
                assert crossing_count(bq, c1, c2) == 0


def test_straight_curve_crosses_the_full_lozenge_chain():
    bq = blossom(a_path(2))
    for w in straight_walks(bq):
        c = curve_of_walk(bq, w)
        inner = [a for a, _ in w.body if not bq.is_blossom_arrow(a)]
        expected = []
        if inner:
            expected = [bq.quiver.src[inner[0]]] + [bq.quiver.tgt[a] for a in inner]
        else:
            expected = [c.crossings[0]]
        assert list(c.crossings) == expected


def test_peak_curve_is_the_rotated_edge():
    # curve(a_peak) is edge(a) with its endpoints slid to the next blossom
    # point: it crosses edge(a) itself plus, at each boundary endpoint of
    # edge(a), the edges strictly after edge(a) in the rotation around that
    # endpoint; a puncture endpoint turns into a spiral marker instead
    from nonkissing.surface import prev_face

    for q in CURVE_INSTANCES:
        bq = blossom(q)
        s = surface_from_quiver(q)
        for v in q.vertices:
            pw = peak_walk(bq, v)
            curve = curve_of_walk(bq, pw)
            crossings = set(curve.crossings)
            expected = {v}
            spiral_cycles = set()
            for beta in bq.quiver.arrows_out[v]:
                root = s.corner_class[(beta, "v")]
                if s.is_puncture(root):
                    # the slid endpoint spirals around the puncture
                    chain = tuple(sorted(a for a, _ in s.class_corners[root]))
                    spiral_cycles.add(frozenset(chain))
                    continue
                # rotation order around the endpoint follows the green chain
                side = (beta, "gs")
                while True:
                    side = s.twin[prev_face(side)]
                    if side is None:
                        break
                    black = s.corner_class[(side[0], "s")]
                    if s.black_kind[black] == "middle":
                        expected.add(s.black_name[black])
            assert crossings == expected, (v, crossings, expected)
            markers = {
                frozenset(m[1])
                for m in (curve.left, curve.right)
                if m[0] == "P"
            }
            assert markers == spiral_cycles, (v, markers, spiral_cycles)


def test_crossing_rejects_different_surfaces():
    bq1 = blossom(a_path(2))
    bq2 = blossom(a_path(3))
    c1 = curve_of_walk(bq1, peak_walk(bq1, "v1"))
    c2 = curve_of_walk(bq2, peak_walk(bq2, "v1"))
    with pytest.raises(DifferentSurface):
        crossing_count(bq1, c1, c2)


def test_unreduced_crossing_rejected():
    bq = blossom(a_path(3))
    pw = peak_walk(bq, "v2")
    c = curve_of_walk(bq, pw)
    bad = CrossingSequence(
        quiver_key=c.quiver_key,
        left=c.left,
        crossings=c.crossings,
        angles=(("a1", 1), ("a1", -1)),
        right=c.right,
    )
    with pytest.raises(NotReducedCrossing):
        walk_of_curve(bq, bad)


def test_surface_dump_stable():
    s = surface_from_quiver(loop_quiver())
    d1 = surface_dump(s)
    d2 = surface_dump(surface_from_quiver(loop_quiver()))
    assert d1 == d2
    assert d1["punctures"]


def test_euler_cross_check_runs_everywhere():
    for q in corpus().values():
        inv = surface_invariants(surface_from_quiver(q))
        assert inv["euler"] == 2 - 2 * inv["genus"] - inv["b"]
