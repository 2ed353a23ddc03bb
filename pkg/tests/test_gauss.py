import pytest

from welded import gauss as ga
from welded.gauss import (LINK, STRINGLINK, GaussDiagram, GaussMoveError,
                          apply_gauss_move, apply_gauss_moves, lemma_star)


def d_of(kind, comps, signs):
    return GaussDiagram.build(kind, comps, signs)


def test_validation():
    with pytest.raises(ValueError):
        d_of(STRINGLINK, [[("t", 1)]], {1: 1})
    with pytest.raises(ValueError):
        d_of(STRINGLINK, [[("t", 1), ("h", 1)]], {1: 2})


def test_equality_ignores_arrow_names_and_rotation():
    a = d_of(STRINGLINK, [[("t", 1), ("h", 1)]], {1: 1})
    b = d_of(STRINGLINK, [[("t", 7), ("h", 7)]], {7: 1})
    assert a == b
    c1 = d_of(LINK, [[("t", 1), ("h", 2), ("t", 2), ("h", 1)]], {1: 1, 2: -1})
    c2 = d_of(LINK, [[("h", 1), ("t", 1), ("h", 2), ("t", 2)]], {1: -1, 2: 1})
    assert c1 == c2
    c3 = d_of(LINK, [[("h", 1), ("t", 1), ("h", 2), ("t", 2)]], {1: 1, 2: 1})
    assert c1 != c3


def test_reid1_round_trip():
    d = d_of(STRINGLINK, [[("t", 1), ("h", 1)]], {1: 1})
    d2 = apply_gauss_move(d, ga.reid1_insert(0, 1, -1))
    assert len(d2.signs) == 2
    k = (set(d2.signs) - {1}).pop()
    assert apply_gauss_move(d2, ga.reid1_delete(k)) == d
    with pytest.raises(GaussMoveError):
        apply_gauss_move(d2, ga.reid1_delete(1))  # endpoints not adjacent


def test_reid2_round_trip():
    d = d_of(STRINGLINK, [[("t", 1), ("h", 1)], []], {1: 1})
    d2 = apply_gauss_move(d, ga.reid2_insert((0, 1), (1, 0), 1))
    assert len(d2.signs) == 3
    new = sorted(set(d2.signs) - {1})
    assert apply_gauss_move(d2, ga.reid2_delete(*new)) == d
    with pytest.raises(GaussMoveError):
        apply_gauss_move(d2, ga.reid2_delete(1, new[0]))


def test_tc_swap():
    d = d_of(STRINGLINK, [[("t", 1), ("t", 2), ("h", 1), ("h", 2)]], {1: 1, 2: 1})
    d2 = apply_gauss_move(d, ga.tc(0, 0))
    assert d2.components[0][:2] == (("t", 2), ("t", 1))
    assert apply_gauss_move(d2, ga.tc(0, 0)) == d
    with pytest.raises(GaussMoveError):
        apply_gauss_move(d, ga.tc(0, 1))


def test_gr_involution():
    d = d_of(LINK, [[("t", 1), ("h", 2)], [("t", 2), ("h", 1)]], {1: 1, 2: -1})
    d2 = apply_gauss_move(d, ga.gr(1))
    assert d2.signs[1] == -1 and d2.signs[2] == -1
    assert apply_gauss_move(d2, ga.gr(1)) == d


def test_sv_insert_delete():
    d = d_of(STRINGLINK, [[("t", 1), ("h", 1)]], {1: 1})
    d0 = apply_gauss_move(d, ga.sv_delete(1))
    assert d0 == d_of(STRINGLINK, [[]], {})
    back = apply_gauss_move(d0, ga.sv_insert(0, 0, 0, 1))
    assert back == d
    cross = d_of(STRINGLINK, [[("t", 1)], [("h", 1)]], {1: 1})
    with pytest.raises(GaussMoveError):
        apply_gauss_move(cross, ga.sv_delete(1))


def test_reid3_slide():
    # h(D) before h(Cp); t(D) before h(Cpp); t(Cp), t(Cpp) adjacent
    d = d_of(
        STRINGLINK,
        [[("h", 1), ("h", 2), ("t", 1), ("h", 3), ("t", 2), ("t", 3)]],
        {1: -1, 2: 1, 3: 1},
    )
    d2 = apply_gauss_move(d, ga.reid3(1, 2, 3))
    assert d2.components[0] == (
        ("h", 2), ("h", 1), ("h", 3), ("t", 1), ("t", 2), ("t", 3))
    back = apply_gauss_move(d2, ga.reid3(1, 2, 3, rev=True))
    assert back == d
    with pytest.raises(GaussMoveError):
        apply_gauss_move(d, ga.reid3(2, 1, 3))


def test_exchange_conjugates_other_endpoint():
    # push t(1) forward through h(2): conjugating pair lands around h(1)
    d = d_of(STRINGLINK, [[("t", 2), ("t", 1), ("h", 2), ("h", 1)]], {1: 1, 2: 1})
    d2 = apply_gauss_move(d, ga.exchange(0, 1, forward=True))
    seq = d2.components[0]
    assert seq.index(("h", 2)) < seq.index(("t", 1)), "endpoint pushed past the head"
    new = sorted(set(d2.signs) - {1, 2})
    assert len(new) == 2
    k1, k2 = new
    assert d2.signs[k1] == 1 and d2.signs[k2] == -1
    i = seq.index(("h", 1))
    assert seq[i - 1] == ("h", k1) and seq[i + 1] == ("h", k2)
    # tails of the new pair sit in arrow 2's block
    assert ga.tail_block(d2, k1) == ga.tail_block(d2, 2)


def test_lemma_star_trivial_word():
    # tail of 1 separated from the end by a cancelling pair of a-heads
    d = d_of(
        STRINGLINK,
        [[("t", 1), ("h", 2), ("h", 3), ("t", 2), ("t", 3), ("h", 1)]],
        {1: 1, 2: 1, 3: -1},
    )
    moved, trace = lemma_star(d, 0, 0, 3)
    # replay gives the same result
    assert apply_gauss_moves(d, trace) == moved
    ci, i = moved.find(("t", 1))
    assert ci == 0 and moved.components[0][i + 1] == ("t", 2)
    assert set(moved.signs) == {1, 2, 3}


def test_lemma_star_plain_transposition():
    d = d_of(STRINGLINK, [[("t", 1), ("t", 2), ("h", 1), ("h", 2)]], {1: 1, 2: 1})
    moved, trace = lemma_star(d, 0, 0, 2)
    assert moved.components[0][:2] == (("t", 2), ("t", 1))
    assert trace == [ga.tc(0, 0)]


def test_lemma_star_rejects_nontrivial_word():
    d = d_of(STRINGLINK, [[("t", 1), ("h", 2), ("t", 2), ("h", 1)]], {1: 1, 2: 1})
    with pytest.raises(GaussMoveError):
        lemma_star(d, 0, 0, 2)


def test_lemma_star_cancels_created_pairs():
    # separating word a a' with the two a-tails adjacent: full cancellation
    d = d_of(
        STRINGLINK,
        [[("t", 1), ("h", 2), ("h", 3), ("t", 2), ("t", 3)], [("h", 1)]],
        {1: 1, 2: -1, 3: 1},
    )
    moved, trace = lemma_star(d, 0, 0, 3)
    assert apply_gauss_moves(d, trace) == moved
    assert set(moved.signs) == {1, 2, 3}
    i = moved.components[0].index(("t", 1))
    assert moved.components[0][i + 1] == ("t", 2)


def test_lemma_star_rejects_own_head():
    d = d_of(
        STRINGLINK,
        [[("t", 1), ("h", 2), ("h", 3), ("h", 1), ("t", 2), ("t", 3)]],
        {1: 1, 2: -1, 3: 1},
    )
    with pytest.raises(GaussMoveError):
        lemma_star(d, 0, 0, 3)
