import pytest

from welded import wgraph as wg
from welded.peripheral import (Basing, apply_peripheral_equivalence, canonical_basing,
                               chen_milnor_normal_form, path_word, preferred_longitudes,
                               preferred_word)
from welded.wgraph import MoveError, WGraph, apply_move, apply_moves
from welded.words import commutator, concat, invert


def chain():
    # comp0: 1* -(w)-> 2 -(u)-> 3*;  comp1: 4*
    return WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, True), (4, 1, True)],
        edges=[(1, 2, (4,)), (2, 3, (4, -4))],
    )


def test_path_word():
    g = chain()
    assert path_word(g, [(0, True)]) == (4,)
    assert path_word(g, [(0, True), (0, False)]) == ()
    assert path_word(g, [(0, True), (1, True)]) == (4,)
    with pytest.raises(MoveError):
        path_word(g, [(0, True), (0, True)])


def test_canonical_basing_forest():
    g = chain()
    b = canonical_basing(g)
    assert b.meridians == (1, 4)
    assert b.loops == ((), ())
    assert b.arcs[0] == ((), ((0, True), (1, True)))
    assert b.arcs[1] == ((),)


def test_canonical_basing_loop():
    g = WGraph.build(vertices=[(1, 0, False)], edges=[(1, 1, (1,))])
    b = canonical_basing(g)
    assert b.meridians == (1,)
    assert b.loops == ((((0, True),),),)
    assert b.arcs == ((),)


def test_preferred_word():
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 1, True)], edges=[])
    # raw arc word mu2 mu1 on component of mu1: weight 1, so prefix mu1^{-1}
    assert preferred_word(g, 1, (2, 1)) == (-1, 2, 1)
    assert preferred_word(g, 1, (2,)) == (2,)
    assert preferred_word(g, 1, (1, 1, 1)) == ()


def test_preferred_longitudes_system():
    g = chain()
    ps = preferred_longitudes(g, canonical_basing(g))
    assert ps.meridians == ((1,), (4,))
    assert ps.arc_longitudes[0] == ((), (4,))
    assert ps.loop_longitudes == ((), ())


def test_peripheral_equivalence_ops():
    g = WGraph.build(vertices=[(1, 0, False), (2, 0, False)],
                     edges=[(1, 1, (2,)), (1, 2, (2, 2)), (2, 1, ())])
    ps = preferred_longitudes(g, canonical_basing(g))
    same = apply_peripheral_equivalence(ps, ("conjugate", 0, (), tuple(range(len(ps.loop_longitudes[0])))))
    assert same == ps
    inv = apply_peripheral_equivalence(ps, ("invert_loop", 0, 0))
    assert apply_peripheral_equivalence(inv, ("invert_loop", 0, 0)) == ps
    if len(ps.loop_longitudes[0]) >= 1 and ps.arc_longitudes[0:]:
        pre = apply_peripheral_equivalence(ps, ("precompose", 0, ("loop", 1), 0))
        lam = ps.loop_longitudes[0][0]
        assert pre.loop_longitudes[0][1] == concat(lam, ps.loop_longitudes[0][1])


def test_normal_form_shapes():
    g = chain()
    nf = chen_milnor_normal_form(g)
    t = nf.graph.graph_type()
    assert t == g.graph_type()
    for c in range(nf.graph.ncomps):
        unmarked = [v for v in nf.graph.component_vertices(c)
                    if v not in nf.graph.marked]
        assert unmarked == [nf.hubs[c]]
    assert nf.loop_words == ((), ())
    # arc words expressed in hub letters only
    hubs = set(nf.hubs)
    for comp_arcs in nf.arc_words:
        for w in comp_arcs:
            assert all(abs(let) in hubs for let in w)
    assert apply_moves(g, nf.trace) == nf.graph


def test_normal_form_idempotent():
    g = chain()
    nf = chen_milnor_normal_form(g)
    nf2 = chen_milnor_normal_form(nf.graph)
    assert nf2.graph == nf.graph
    assert nf2.arc_words == nf.arc_words
    assert nf2.loop_words == nf.loop_words


def test_normal_form_two_unmarked_join():
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, False)],
        edges=[(1, 2, ()), (2, 3, ())],
    )
    nf = chen_milnor_normal_form(g)
    unmarked = [v for v in nf.graph.vcomp if v not in nf.graph.marked]
    assert len(unmarked) == 1


def test_normal_form_own_component_letter_removed():
    # spine vertex of comp 0 whose out-edge carries a comp-0 letter
    g = WGraph.build(
        vertices=[(1, 0, True), (2, 0, False), (3, 0, True), (4, 1, True)],
        edges=[(1, 2, (4,)), (2, 3, (2, 4))],
    )
    nf = chen_milnor_normal_form(g)
    own = nf.hubs[0]
    for w in nf.arc_words[0]:
        assert all(abs(let) != own for let in w)


def test_normal_form_loops():
    g = WGraph.build(
        vertices=[(1, 0, False), (2, 0, False), (3, 1, True)],
        edges=[(1, 2, (3,)), (2, 1, (3, -3))],
    )
    nf = chen_milnor_normal_form(g)
    assert nf.graph.graph_type() == g.graph_type()
    assert len(nf.loop_words[0]) == 1
