import pytest

from welded import wgraph as wg
from welded.wgraph import (Edge, Move, MoveError, WGraph, apply_move, apply_moves,
                           expand_macro, is_isomorphic, to_reduced_form)
from welded.words import concat, invert


def line_graph():
    # m1 -[b]-> a -[]-> b -[a c']-> m2   (single component), c isolated marked on comp 1
    return WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, False), (4, 0, True),
                  (5, 1, True)],
        edges=[(1, 2, (3,)), (2, 3, ()), (3, 4, (2, -5))],
    )


def test_graph_type():
    g = WGraph.build(vertices=[(1, 0, True), (2, 0, True)], edges=[(1, 2, ())])
    assert g.graph_type() == ((2, 0),)
    loop = WGraph.build(vertices=[(1, 0, False)], edges=[(1, 1, ())])
    assert loop.graph_type() == ((0, 1),)
    assert line_graph().graph_type() == ((2, 0), (1, 0))


def test_validate_rejects_cross_component_edge():
    with pytest.raises(ValueError):
        WGraph.build(vertices=[(1, 0, False), (2, 1, False)], edges=[(1, 2, ())])


def test_contract_renames_occurrences():
    g = line_graph()
    h = apply_move(g, wg.contract(1))
    assert not h.has_vertex(3)
    assert sorted(e.triple() for e in h.edges) == [(1, 2, (2,)), (2, 4, (2, -5))]
    # removed vertex renamed to the surviving endpoint inside labels
    assert h.graph_type() == g.graph_type()


def test_contract_requires_empty_and_unmarked():
    g = line_graph()
    with pytest.raises(MoveError):
        apply_move(g, wg.contract(0))
    with pytest.raises(MoveError):
        apply_move(g, wg.contract(2))  # dst marked
    loop = WGraph.build(vertices=[(1, 0, False)], edges=[(1, 1, ())])
    with pytest.raises(MoveError):
        apply_move(loop, wg.contract(0))


def test_expand_then_contract_roundtrip():
    g = line_graph()
    m = wg.expand(2, moved=[(0, "dst")], occs=[(2, 0)], new_src_is_new=False)
    h = apply_move(g, m)
    assert h.graph_type() == g.graph_type()
    u = g.next_vid
    assert h.has_vertex(u)
    # fresh empty edge (2, u); contracting it undoes the expansion
    eps = [e for e in h.edges if e.label == () and {e.src, e.dst} == {2, u}]
    back = apply_move(h, wg.contract(eps[0].eid))
    assert back == g


def test_reverse_involution():
    g = line_graph()
    assert apply_move(apply_move(g, wg.reverse(2)), wg.reverse(2)) == g
    h = apply_move(g, wg.reverse(2))
    assert h.edge(2).triple() == (4, 3, (5, -2))


def test_reid1_inverse_pair():
    g = line_graph()
    h = apply_move(g, wg.reid1(2, 1))
    assert h.edge(2).label == (3, 2, -5)
    assert apply_move(h, wg.reid1(2, -1)) == g


def test_stabilize_prefixes_and_checks():
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, True)],
        edges=[(2, 1, ()), (2, 3, ()), (2, 2, (1,))],
    )
    h = apply_move(g, wg.stabilize(2, -1))
    assert sorted(e.triple() for e in h.edges) == [
        (2, 1, (-1,)), (2, 2, (1,)), (2, 3, (-1,))]
    bad = WGraph.build(vertices=[(1, 0, True), (2, 0, False)], edges=[(1, 2, ())])
    with pytest.raises(MoveError):
        apply_move(bad, wg.stabilize(2, 1))  # edge points inward
    with pytest.raises(MoveError):
        apply_move(g, wg.stabilize(1, 2))  # marked vertex


def test_reid3_both_directions():
    # witness (a=1, b=2, w=(3,)); edge labeled a·w = (1, 3)
    g = WGraph.build(
        vertices=[(1, 0, False), (2, 0, False), (3, 0, False)],
        edges=[(1, 2, (3,)), (3, 1, (1, 3)), (2, 3, ())],
    )
    h = apply_move(g, wg.reid3(1, 0))
    assert h.edge(1).label == (3, 2)
    assert apply_move(h, wg.reid3(1, 0, rev=True)) == g
    with pytest.raises(MoveError):
        apply_move(g, wg.reid3(0, 0))
    with pytest.raises(MoveError):
        apply_move(g, wg.reid3(2, 0))


def test_self_virtualize():
    g = WGraph.build(vertices=[(1, 0, True), (2, 0, False), (3, 1, True)],
                     edges=[(1, 2, ()), (3, 3, ())])
    h = apply_move(g, wg.self_virtualize(0, 2))
    assert h.edge(0).label == (2,)
    assert apply_move(h, wg.self_virtualize(0, 2, delete=True)) == g
    with pytest.raises(MoveError):
        apply_move(g, wg.self_virtualize(1, 2))  # letter from another component
    one_arrow = apply_move(g, wg.self_virtualize(0, -1))
    assert one_arrow.edge(0).label == (-1,)


def test_push_through_bivalent_vertex():
    # in-edge label u·w, out-edge label x -> in-edge u, out-edge w·x
    u, w, x = (1,), (4, -5), (5,)
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, True), (4, 0, False),
                  (5, 0, False)],
        edges=[(1, 2, concat(u, w)), (2, 3, x), (4, 1, ()), (5, 1, ())],
    )
    h = apply_move(g, wg.push(2, w))
    assert h.edge(0).label == u
    assert h.edge(1).label == concat(w, x)


def test_split_and_merge():
    g = line_graph()
    h = apply_move(g, wg.split(2, 1))
    c = g.next_vid
    assert h.edge(2).triple() == (3, c, (2,))
    new_eid = g.next_eid
    assert h.edge(new_eid).triple() == (c, 4, (-5,))
    assert h.graph_type() == g.graph_type()
    back = apply_move(h, wg.merge(c))
    assert back == g


def test_gen_stabilize_direct():
    # edges at v=2 get prefix p, occurrences of 2 elsewhere conjugated by p
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, False), (4, 0, True)],
        edges=[(2, 1, (3,)), (2, 3, ()), (3, 4, (2,)), (2, 2, (2, 3))],
    )
    h = apply_move(g, wg.gen_stabilize(2, -3))
    assert h.edge(0).label == ()
    assert h.edge(1).label == (-3,)
    assert h.edge(2).label == (3, 2, -3)
    assert h.edge(3).label == (2, 3)
    with pytest.raises(MoveError):
        apply_move(g, wg.gen_stabilize(2, 2))


def test_rephrased_reid3_insertions():
    g = WGraph.build(
        vertices=[(1, 0, False), (2, 0, False), (3, 0, False)],
        edges=[(1, 2, (3,)), (3, 1, (3, 3)), (2, 3, ())],
    )
    wit = g.edge(0)
    base = concat(invert(wit.label), (-1,), wit.label, (2,))
    assert base == (-3, -1, 3, 2)
    h = apply_move(g, wg.rephrased_reid3(1, 1, 0))
    assert h.edge(1).label == concat((3,), base, (3,))
    h2 = apply_move(g, wg.rephrased_reid3(1, 1, 0, rot=2, inverted=True))
    assert h2.edge(1).label == concat((3,), (1, 3, -2, -3), (3,))


def macro_fixture():
    # 2 and 3 occur in no label; edges at 3 (and its loop) point outward
    return WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, False), (4, 0, True),
                  (5, 0, False)],
        edges=[(1, 2, (5, 4)), (2, 3, (4, -5)), (3, 4, (5,)), (5, 2, ()),
               (2, 5, (4,))],
    )


def gen_stab_fixture():
    # all edges at 3 outward, 3 occurs in other labels and in its own loop
    return WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, False), (4, 0, True),
                  (5, 0, False)],
        edges=[(1, 2, (5, 3)), (3, 2, (4, -3)), (3, 4, (5,)), (5, 2, ()),
               (3, 3, (3, 4))],
    )


MACRO_CASES = [
    ("push", macro_fixture, lambda g: wg.push(2, (4, -5))),
    ("push_empty", macro_fixture, lambda g: wg.push(2, ())),
    ("split", macro_fixture, lambda g: wg.split(1, 1)),
    ("split0", macro_fixture, lambda g: wg.split(1, 0)),
    ("split_loop", gen_stab_fixture, lambda g: wg.split(4, 1)),
    ("merge", macro_fixture, lambda g: wg.merge(3)),
    ("gen_stab", gen_stab_fixture, lambda g: wg.gen_stabilize(3, 5)),
    ("gen_stab_neg", gen_stab_fixture, lambda g: wg.gen_stabilize(3, -4)),
    ("rephrased", macro_fixture, lambda g: wg.rephrased_reid3(0, 1, 2, rot=0)),
    ("rephrased_rot", macro_fixture,
     lambda g: wg.rephrased_reid3(0, 2, 2, rot=3, inverted=True)),
    ("rephrased_self_wit", macro_fixture,
     lambda g: wg.rephrased_reid3(4, 1, 1, rot=2, inverted=False)),
]


@pytest.mark.parametrize("name,fix,mk", MACRO_CASES)
def test_macro_matches_direct(name, fix, mk):
    g = fix()
    m = mk(g)
    direct = apply_move(g, m)
    seq = expand_macro(g, m)
    folded = apply_moves(g, seq)
    assert folded == direct
    assert all(s.kind in wg.PRIMITIVE_KINDS for s in seq)


def test_macro_rejects_primitives():
    g = line_graph()
    with pytest.raises(MoveError):
        expand_macro(g, wg.contract(1))
    with pytest.raises(MoveError):
        expand_macro(g, wg.self_virtualize(1, 2))


def test_type_preserved_by_moves():
    g = line_graph()
    for m in [wg.reverse(0), wg.reid1(0, 1), wg.split(2, 1),
              wg.contract(1), wg.self_virtualize(1, 2)]:
        assert apply_move(g, m).graph_type() == g.graph_type()
    h = macro_fixture()
    for m in [wg.push(2, (4, -5)), wg.merge(3), wg.rephrased_reid3(0, 1, 2)]:
        assert apply_move(h, m).graph_type() == h.graph_type()


def test_to_reduced_form():
    g = line_graph()
    r, trace = to_reduced_form(g)
    for e in r.edges:
        assert len(e.label) <= 1
        if e.label == ():
            assert e.is_loop or e.src in r.marked or e.dst in r.marked
    for v in r.marked:
        assert r.degree(v) <= 1
    r2, trace2 = to_reduced_form(r)
    assert r2 == r and trace2 == []
    assert apply_moves(g, trace) == r


def test_is_isomorphic():
    g = line_graph()
    # same graph with vertices renamed
    h = WGraph.build(
        vertices=[(10, 0, True), (20, 0, False), (30, 0, False), (40, 0, True),
                  (50, 1, True)],
        edges=[(10, 20, (30,)), (20, 30, ()), (30, 40, (20, -50))],
    )
    assert is_isomorphic(g, h)
    assert is_isomorphic(h, g)
    # one label changed
    h2 = WGraph.build(
        vertices=[(10, 0, True), (20, 0, False), (30, 0, False), (40, 0, True),
                  (50, 1, True)],
        edges=[(10, 20, (30,)), (20, 30, ()), (30, 40, (20, 50))],
    )
    assert not is_isomorphic(g, h2)
    # different type
    h3 = WGraph.build(vertices=[(1, 0, True), (2, 0, True)], edges=[(1, 2, ())])
    assert not is_isomorphic(g, h3)


def test_move_json_round_trip():
    m = wg.rephrased_reid3(3, 1, 0, rot=2, inverted=True)
    assert Move.from_json(m.to_json()) == m
    m2 = wg.expand(2, moved=[(0, "dst")], occs=[(2, 0)], new_src_is_new=True)
    assert Move.from_json(m2.to_json()) == m2
