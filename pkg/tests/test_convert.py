import random
import warnings

import pytest

from welded.convert import (contract_empty_edges, cyclize, linearize, psi, psi_link,
                            psi_stringlink, xi, xi_link, xi_stringlink)
from welded.gauss import LINK, STRINGLINK, GaussDiagram
from welded.wgraph import MoveError, WGraph, apply_moves, is_isomorphic


def d_of(kind, comps, signs):
    return GaussDiagram.build(kind, comps, signs)


def test_psi_arrowless_stringlink():
    d = d_of(STRINGLINK, [[], []], {})
    g = psi_stringlink(d)
    assert g.graph_type() == ((2, 0), (2, 0))
    assert all(e.label == () for e in g.edges)
    assert len(g.edges) == 2


def test_psi_single_cross_arrow():
    # tail on comp 0, head on comp 1: comp 0 keeps its tail vertex
    d = d_of(STRINGLINK, [[("t", 1)], [("h", 1)]], {1: 1})
    g = psi_stringlink(d)
    assert g.graph_type() == ((2, 0), (2, 0))
    t = [v for v in g.vcomp if v not in g.marked]
    assert len(t) == 1
    labels = sorted(e.label for e in g.edges)
    assert labels == [(), (), (t[0],)]


def test_psi_link_self_arrow_and_unknot():
    d = d_of(LINK, [[("t", 1), ("h", 1)]], {1: 1})
    g = psi_link(d)
    assert g.graph_type() == ((0, 1),)
    assert len(g.edges) == 1 and g.edges[0].is_loop
    v = g.edges[0].src
    assert g.edges[0].label == (v,)
    unknot = psi_link(d_of(LINK, [[]], {}))
    assert unknot.graph_type() == ((0, 1),)
    assert unknot.edges[0].label == ()


def test_psi_link_headonly_component_flagged():
    d = d_of(LINK, [[("t", 1)], [("h", 1)]], {1: 1})
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        g = psi_link(d)
    assert any("no tail" in str(x.message) for x in w)
    assert g.graph_type() == ((0, 1), (0, 1))


def test_linearize_already_linear():
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, True)],
        edges=[(1, 2, ()), (2, 3, (2,))],
    )
    lin, trace = linearize(g)
    assert lin == g
    assert trace == []


def test_linearize_extra_empty_edge():
    # one extra edge with empty label hanging off the spine: the extra vertex
    # lands at its contour position between the initial vertex and its anchor
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, True), (4, 0, False)],
        edges=[(1, 2, (4,)), (2, 3, (2,)), (2, 4, ())],
    )
    lin, trace = linearize(g)
    assert apply_moves(g, trace) == lin
    order = [lin.marked_order[0][0]]
    nxt = {e.src: e for e in lin.edges}
    labels = []
    while order[-1] in nxt:
        labels.append(nxt[order[-1]].label)
        order.append(nxt[order[-1]].dst)
    assert order == [1, 4, 2, 3]
    assert labels == [(4,), (), (2,)]


def test_linearize_requires_type():
    loop = WGraph.build(vertices=[(1, 0, False)], edges=[(1, 1, ())])
    with pytest.raises(MoveError):
        linearize(loop)


def test_xi_round_trip_single_arrow():
    d = d_of(STRINGLINK, [[("t", 1)], [("h", 1)]], {1: 1})
    g = psi_stringlink(d)
    assert xi_stringlink(g) == d
    arrowless = psi_stringlink(d_of(STRINGLINK, [[], []], {}))
    assert xi_stringlink(arrowless) == d_of(STRINGLINK, [[], []], {})


def test_xi_link_single_loop_and_orientation():
    g = WGraph.build(vertices=[(1, 0, False)], edges=[(1, 1, (1,))])
    d_plus = xi_link(g)
    assert d_plus == d_of(LINK, [[("t", 1), ("h", 1)]], {1: 1})
    d_minus = xi_link(g, {0: -1})
    assert d_minus == d_of(LINK, [[("h", 1), ("t", 1)]], {1: -1})
    empty = WGraph.build(vertices=[(1, 0, False)], edges=[(1, 1, ())])
    assert xi_link(empty) == d_of(LINK, [[]], {})


def test_round_trip_psi_xi_psi():
    rng = random.Random(5)
    for _ in range(40):
        ncomp = rng.randrange(1, 4)
        narr = rng.randrange(0, 9)
        slots = [[] for _ in range(ncomp)]
        signs = {}
        for k in range(1, narr + 1):
            signs[k] = rng.choice([1, -1])
            slots[rng.randrange(ncomp)].append(("t", k))
            slots[rng.randrange(ncomp)].append(("h", k))
        for s in slots:
            rng.shuffle(s)
        d = d_of(STRINGLINK, slots, signs)
        g = psi_stringlink(d)
        g2 = psi_stringlink(xi_stringlink(g))
        assert is_isomorphic(g, g2)


def test_round_trip_linear_graphs():
    rng = random.Random(9)
    for _ in range(40):
        ncomp = rng.randrange(1, 3)
        vertices = []
        vid = 1
        interior = []
        comp_spans = []
        for c in range(ncomp):
            n = rng.randrange(1, 4)
            span = []
            vertices.append((vid, c, True))
            m0 = vid
            vid += 1
            for _ in range(n):
                vertices.append((vid, c, False))
                interior.append(vid)
                span.append(vid)
                vid += 1
            vertices.append((vid, c, True))
            vid += 1
            comp_spans.append((m0, span, vid - 1))
        edges = []
        missing = set(interior)
        for m0, span, m1 in comp_spans:
            chain = [m0] + span + [m1]
            for a, b in zip(chain, chain[1:]):
                n = rng.randrange(1, 3)
                label = []
                for _ in range(n):
                    v = rng.choice(interior)
                    missing.discard(v)
                    label.append(v * rng.choice([1, -1]))
                edges.append((a, b, label))
        g = WGraph.build(vertices, edges)
        if missing or any(e.label == () for e in g.edges):
            continue
        g2 = contract_empty_edges(psi_stringlink(xi_stringlink(g)))
        assert is_isomorphic(g2, contract_empty_edges(g))


def test_round_trip_links():
    rng = random.Random(12)
    for _ in range(25):
        ncomp = rng.randrange(1, 3)
        narr = rng.randrange(1, 7)
        slots = [[] for _ in range(ncomp)]
        signs = {}
        for k in range(1, narr + 1):
            signs[k] = rng.choice([1, -1])
            slots[rng.randrange(ncomp)].append(("t", k))
            slots[rng.randrange(ncomp)].append(("h", k))
        for s in slots:
            rng.shuffle(s)
        if any(not any(t[0] == "t" for t in s) and s for s in slots):
            continue
        d = d_of(LINK, slots, signs)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g = psi_link(d)
            g2 = psi_link(xi_link(g))
        assert is_isomorphic(g, g2)
