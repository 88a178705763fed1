"""Independent oracles the tests check production code against.

These deliberately re-derive results from first principles (raw word growth,
raw window scans, a generic graph-isomorphism backend) so they share no code
path with the implementations they certify.
"""

from __future__ import annotations

import networkx as nx

from nonkissing.quiver import BlossomQuiver, BoundQuiver
from nonkissing.walks import (
    Occurrences,
    make_window,
    pair_ok,
    rev_word,
    _tail_periods_for_pair,
)


def _letters(bq: BlossomQuiver):
    out = []
    for a in bq.quiver.arrow_ids:
        out.append((a, 1))
        out.append((a, -1))
    return out


def _extensions_right(bq, word):
    return [m for m in _letters(bq) if pair_ok(bq, word[-1], m)]


def _extensions_left(bq, word):
    return [m for m in _letters(bq) if pair_ok(bq, m, word[0])]


def brute_force_finite_walks(bq: BlossomQuiver, max_len: int = 24) -> set:
    """All undirected maximal finite words, by exhaustive growth.

    A finite word is maximal when neither end extends; with cycles present
    the enumeration below is still exhaustive for words up to max_len.
    """
    seen: set[tuple] = set()
    maximal: set[tuple] = set()
    frontier = [(l,) for l in _letters(bq)]
    while frontier:
        nxt = []
        for word in frontier:
            key = min(word, rev_word(word))
            if key in seen:
                continue
            seen.add(key)
            right = _extensions_right(bq, word)
            left = _extensions_left(bq, word)
            if not right and not left:
                maximal.add(key)
                continue
            if len(word) >= max_len:
                continue
            for m in right:
                nxt.append(word + (m,))
            for m in left:
                nxt.append((m,) + word)
        frontier = nxt
    return maximal


def raw_window_kiss_count(bq: BlossomQuiver, w1, w2, extra: int = 0) -> int:
    """Plain scan of all finite factor alignments inside the unrolled window."""
    p1l, p1r, p2l, p2r = _tail_periods_for_pair(w1, w2, extra)
    win1 = make_window(w1, p1l, p1r)
    win2 = make_window(w2, p2l, p2r)
    occ1 = Occurrences(bq, win1)
    occ2 = Occurrences(bq, win2)
    tops = occ1.collect("top")
    bottoms = occ2.collect("bottom")
    return sum(
        len(t_list) * len(bottoms[key])
        for key, t_list in tops.items()
        if key in bottoms
    )


def vf2_isomorphic(q1: BoundQuiver, q2: BoundQuiver) -> bool:
    """Quiver isomorphism via a generic VF2 matcher on an arrow-node digraph."""

    def encode(q: BoundQuiver) -> nx.DiGraph:
        g = nx.DiGraph()
        for v in q.vertices:
            g.add_node(("v", v), kind="vertex")
        for a, s, t in q.arrows:
            g.add_node(("a", a), kind="arrow")
            g.add_edge(("v", s), ("a", a), kind="src")
            g.add_edge(("a", a), ("v", t), kind="tgt")
        for a, b in q.relations:
            g.add_edge(("a", a), ("a", b), kind="rel")
        return g

    matcher = nx.algorithms.isomorphism.DiGraphMatcher(
        encode(q1),
        encode(q2),
        node_match=lambda x, y: x["kind"] == y["kind"],
        edge_match=lambda x, y: x["kind"] == y["kind"],
    )
    return matcher.is_isomorphic()
