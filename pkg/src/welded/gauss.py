"""Gauss diagrams for welded links and string links, and their moves.

A diagram is a family of token sequences — ("t", k) / ("h", k) for the tail
and head of arrow k — cyclic for links, linear for string links, plus a sign
per arrow.  Moves are purely order-local rewrites of these sequences:

* reid1: insert/delete an arrow whose endpoints are adjacent;
* reid2: insert/delete an oppositely-signed pair with adjacent heads and
  adjacent tails;
* reid3: slide a head past an adjacent head while its tail crosses the
  matching witness head (the three-arrow triangle move);
* tc: adjacent tails commute;
* exchange: push an endpoint through an adjacent head at the cost of a
  conjugating arrow pair at the moved arrow's other endpoint;
* sv: insert/delete a self-arrow;
* gr: reverse a link component and the signs of arrows heading to it;
* upsilon: the hula-hoop family — a hoop's tail pair slides past a sandwiched
  tail bunch interlocked with a second hoop (see ``UpsilonInstance``).

Diagram equality is insensitive to arrow numbering and, for links, to the
rotation of each component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

Token = tuple[str, int]

LINK = "link"
STRINGLINK = "stringlink"


class GaussMoveError(ValueError):
    """Pattern mismatch or malformed parameters, reported with the position."""


@dataclass(frozen=True)
class GaussDiagram:
    kind: str
    components: tuple[tuple[Token, ...], ...]
    signs: dict[int, int]

    def __post_init__(self):
        if self.kind not in (LINK, STRINGLINK):
            raise ValueError(f"bad diagram kind {self.kind!r}")

    @classmethod
    def build(cls, kind: str, components: Sequence[Sequence[Token]],
              signs: dict[int, int]) -> "GaussDiagram":
        d = cls(kind, tuple(tuple(c) for c in components), dict(signs))
        d.validate()
        return d

    def validate(self) -> None:
        seen: dict[Token, int] = {}
        for ci, comp in enumerate(self.components):
            for tok in comp:
                what, k = tok
                if what not in ("t", "h"):
                    raise ValueError(f"bad token {tok}")
                if tok in seen:
                    raise ValueError(f"token {tok} appears twice")
                seen[tok] = ci
        for k, s in self.signs.items():
            if s not in (1, -1):
                raise ValueError(f"arrow {k} has sign {s}")
            if ("t", k) not in seen or ("h", k) not in seen:
                raise ValueError(f"arrow {k} is missing an endpoint")
        for tok in seen:
            if tok[1] not in self.signs:
                raise ValueError(f"token {tok} has no arrow record")

    @property
    def arrows(self) -> tuple[int, ...]:
        return tuple(sorted(self.signs))

    def fresh_arrow(self) -> int:
        return 1 + max(self.signs, default=0)

    def find(self, tok: Token) -> tuple[int, int]:
        for ci, comp in enumerate(self.components):
            if tok in comp:
                return ci, comp.index(tok)
        raise GaussMoveError(f"token {tok} not in diagram")

    def component_of_arrowhead(self, k: int) -> int:
        return self.find(("h", k))[0]

    def _canonical(self):
        rot_ranges = []
        for comp in self.components:
            n = len(comp)
            if self.kind == LINK and n > 1:
                rot_ranges.append(range(n))
            else:
                rot_ranges.append(range(1))
        best = None
        for rots in itertools.product(*rot_ranges):
            relabel: dict[int, int] = {}
            out = []
            for comp, r in zip(self.components, rots):
                seq = comp[r:] + comp[:r]
                enc = []
                for what, k in seq:
                    if k not in relabel:
                        relabel[k] = len(relabel)
                    enc.append((what, relabel[k], self.signs[k]))
                out.append(tuple(enc))
            cand = tuple(out)
            if best is None or cand < best:
                best = cand
        return (self.kind, len(self.components), best)

    def __eq__(self, other):
        if not isinstance(other, GaussDiagram):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        comps = " | ".join(
            " ".join(f"{w}{k}" for w, k in comp) for comp in self.components)
        sg = ",".join(f"{k}{'+' if s > 0 else '-'}" for k, s in sorted(self.signs.items()))
        return f"GaussDiagram({self.kind}: {comps} ; {sg})"


@dataclass(frozen=True)
class GMove:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None


def reid1_insert(comp: int, pos: int, sign: int, head_first: bool = False) -> GMove:
    return GMove("reid1_insert", {"comp": comp, "pos": pos, "sign": sign,
                                  "head_first": head_first})


def reid1_delete(arrow: int) -> GMove:
    return GMove("reid1_delete", {"arrow": arrow})


def reid2_insert(tail_at: tuple[int, int], head_at: tuple[int, int], sign: int) -> GMove:
    return GMove("reid2_insert", {"tail_at": tail_at, "head_at": head_at, "sign": sign})


def reid2_delete(a1: int, a2: int) -> GMove:
    return GMove("reid2_delete", {"a1": a1, "a2": a2})


def reid3(d_arrow: int, cp: int, cpp: int, rev: bool = False) -> GMove:
    return GMove("reid3", {"d": d_arrow, "cp": cp, "cpp": cpp, "reverse": rev})


def tc(comp: int, pos: int) -> GMove:
    return GMove("tc", {"comp": comp, "pos": pos})


def exchange(comp: int, pos: int, forward: bool = True) -> GMove:
    return GMove("exchange", {"comp": comp, "pos": pos, "forward": forward})


def sv_insert(comp: int, tail_pos: int, head_pos: int, sign: int) -> GMove:
    return GMove("sv_insert", {"comp": comp, "tail_pos": tail_pos,
                               "head_pos": head_pos, "sign": sign})


def sv_delete(arrow: int) -> GMove:
    return GMove("sv_delete", {"arrow": arrow})


def gr(comp: int) -> GMove:
    return GMove("gr", {"comp": comp})


def upsilon(instance: "UpsilonInstance", rightward: bool = True) -> GMove:
    return GMove("upsilon", {"instance": instance, "rightward": rightward})


# ---------------------------------------------------------------------------
# sequence surgery helpers


def _norm_index(d: GaussDiagram, comp: int, pos: int, insert: bool = False) -> int:
    if not 0 <= comp < len(d.components):
        raise GaussMoveError(f"no component {comp}")
    n = len(d.components[comp])
    if d.kind == LINK:
        if n == 0:
            if insert and pos == 0:
                return 0
            raise GaussMoveError(f"position {pos} out of range on empty component {comp}")
        return pos % n
    hi = n + 1 if insert else n
    if not 0 <= pos < hi:
        raise GaussMoveError(f"position {pos} out of range on component {comp}")
    return pos


def _with_component(d: GaussDiagram, comp: int, seq: Sequence[Token]) -> GaussDiagram:
    comps = list(d.components)
    comps[comp] = tuple(seq)
    return GaussDiagram(d.kind, tuple(comps), dict(d.signs))


def _insert_tokens(d: GaussDiagram, at: Iterable[tuple[int, int, Sequence[Token]]]
                   ) -> GaussDiagram:
    """Insert token runs at several (component, position) places at once."""
    per_comp: dict[int, list[tuple[int, list[Token]]]] = {}
    for comp, pos, toks in at:
        pos = _norm_index(d, comp, pos, insert=True)
        per_comp.setdefault(comp, []).append((pos, list(toks)))
    comps = [list(c) for c in d.components]
    for comp, inserts in per_comp.items():
        for pos, toks in sorted(inserts, key=lambda x: -x[0]):
            comps[comp][pos:pos] = toks
    return GaussDiagram(d.kind, tuple(tuple(c) for c in comps), dict(d.signs))


def _delete_tokens(d: GaussDiagram, toks: Iterable[Token]) -> GaussDiagram:
    doomed = set(toks)
    comps = tuple(tuple(t for t in comp if t not in doomed) for comp in d.components)
    return GaussDiagram(d.kind, comps, dict(d.signs))


def _adjacent(d: GaussDiagram, comp: int, i: int, j: int) -> bool:
    n = len(d.components[comp])
    if d.kind == LINK and n > 1:
        return j == (i + 1) % n or i == (j + 1) % n
    return abs(i - j) == 1


def _succ(d: GaussDiagram, comp: int, i: int) -> int | None:
    n = len(d.components[comp])
    if d.kind == LINK and n > 1:
        return (i + 1) % n
    return i + 1 if i + 1 < n else None


def tail_block(d: GaussDiagram, arrow: int) -> tuple[int, int, int]:
    """Identify the maximal tail run containing the arrow's tail:
    (component, start index, length).  Blocks are the letters of head words."""
    ci, i = d.find(("t", arrow))
    comp = d.components[ci]
    n = len(comp)
    cyclic = d.kind == LINK and n > 1
    if all(tok[0] == "t" for tok in comp):
        return ci, 0, n
    lo = i
    while True:
        prev = (lo - 1) % n if cyclic else lo - 1
        if prev < 0 or comp[prev][0] != "t":
            break
        lo = prev
    length = 1
    while True:
        nxt = (lo + length) % n if cyclic else lo + length
        if (not cyclic and nxt >= n) or comp[nxt % n][0] != "t":
            break
        length += 1
    return ci, lo, length


def _same_block(d: GaussDiagram, a1: int, a2: int) -> bool:
    c1, lo1, n1 = tail_block(d, a1)
    c2, lo2, _ = tail_block(d, a2)
    return (c1, lo1) == (c2, lo2)


def head_word_between(d: GaussDiagram, comp: int, start: int, stop: int
                      ) -> list[tuple[int, int, int]]:
    """Heads strictly between two positions walking forward from start;
    entries are (arrow, sign, block key)."""
    n = len(d.components[comp])
    out = []
    i = start
    while True:
        i = _succ(d, comp, i)
        if i is None or i == stop:
            break
        what, k = d.components[comp][i]
        if what == "h":
            ci, lo, _ = tail_block(d, k)
            out.append((k, d.signs[k], hash((ci, lo))))
    return out


# ---------------------------------------------------------------------------
# move application


def _apply_reid1_insert(d: GaussDiagram, m: GMove) -> GaussDiagram:
    if m.sign not in (1, -1):
        raise GaussMoveError("reid1: sign must be +1 or -1")
    k = d.fresh_arrow()
    toks = [("h", k), ("t", k)] if m.head_first else [("t", k), ("h", k)]
    d2 = _insert_tokens(d, [(m.comp, m.pos, toks)])
    d2.signs[k] = m.sign
    d2.validate()
    return d2


def _apply_reid1_delete(d: GaussDiagram, m: GMove) -> GaussDiagram:
    k = m.arrow
    ct, it = d.find(("t", k))
    ch, ih = d.find(("h", k))
    if ct != ch or not _adjacent(d, ct, it, ih):
        raise GaussMoveError(f"reid1: endpoints of arrow {k} are not adjacent")
    d2 = _delete_tokens(d, [("t", k), ("h", k)])
    del d2.signs[k]
    return d2


def _apply_reid2_insert(d: GaussDiagram, m: GMove) -> GaussDiagram:
    if m.sign not in (1, -1):
        raise GaussMoveError("reid2: sign must be +1 or -1")
    k1 = d.fresh_arrow()
    k2 = k1 + 1
    tc_, tp = m.tail_at
    hc, hp = m.head_at
    d2 = _insert_tokens(d, [(tc_, tp, [("t", k1), ("t", k2)]),
                            (hc, hp, [("h", k2), ("h", k1)])])
    d2.signs[k1] = m.sign
    d2.signs[k2] = -m.sign
    d2.validate()
    return d2


def _apply_reid2_delete(d: GaussDiagram, m: GMove) -> GaussDiagram:
    a1, a2 = m.a1, m.a2
    if a1 == a2:
        raise GaussMoveError("reid2: need two distinct arrows")
    if d.signs[a1] != -d.signs[a2]:
        raise GaussMoveError("reid2: arrows must have opposite signs")
    c1, h1 = d.find(("h", a1))
    c2, h2 = d.find(("h", a2))
    if c1 != c2 or not _adjacent(d, c1, h1, h2):
        raise GaussMoveError(f"reid2: heads of {a1},{a2} are not adjacent")
    c1, t1 = d.find(("t", a1))
    c2, t2 = d.find(("t", a2))
    if c1 != c2 or not _adjacent(d, c1, t1, t2):
        raise GaussMoveError(f"reid2: tails of {a1},{a2} are not adjacent")
    d2 = _delete_tokens(d, [("t", a1), ("h", a1), ("t", a2), ("h", a2)])
    del d2.signs[a1]
    del d2.signs[a2]
    return d2


def _swap(d: GaussDiagram, comp: int, i: int, j: int) -> GaussDiagram:
    seq = list(d.components[comp])
    seq[i], seq[j] = seq[j], seq[i]
    return _with_component(d, comp, seq)


def _apply_tc(d: GaussDiagram, m: GMove) -> GaussDiagram:
    comp, pos = m.comp, _norm_index(d, m.comp, m.pos)
    nxt = _succ(d, comp, pos)
    if nxt is None:
        raise GaussMoveError(f"tc: no successor of position {pos}")
    seq = d.components[comp]
    if seq[pos][0] != "t" or seq[nxt][0] != "t":
        raise GaussMoveError(f"tc: tokens at {pos},{nxt} on component {comp} are not both tails")
    return _swap(d, comp, pos, nxt)


def _apply_reid3(d: GaussDiagram, m: GMove) -> GaussDiagram:
    a_d, cp, cpp = m.d, m.cp, m.cpp
    if len({a_d, cp, cpp}) != 3:
        raise GaussMoveError("reid3: needs three distinct arrows")
    if d.signs[cp] != d.signs[cpp]:
        raise GaussMoveError("reid3: the two witness arrows must share a sign")
    if not _same_block(d, cp, cpp):
        raise GaussMoveError("reid3: witness tails are not in one block")
    chd, ihd = d.find(("h", a_d))
    chp, ihp = d.find(("h", cp))
    ctd, itd = d.find(("t", a_d))
    chpp, ihpp = d.find(("h", cpp))
    if m.params["reverse"]:
        if chd != chp or _succ(d, chp, ihp) != ihd:
            raise GaussMoveError("reid3: heads must be adjacent as (cp, d)")
        if ctd != chpp or _succ(d, chpp, ihpp) != itd:
            raise GaussMoveError("reid3: tail of d must follow the head of cpp")
    else:
        if chd != chp or _succ(d, chd, ihd) != ihp:
            raise GaussMoveError("reid3: heads must be adjacent as (d, cp)")
        if ctd != chpp or _succ(d, ctd, itd) != ihpp:
            raise GaussMoveError("reid3: tail of d must precede the head of cpp")
    d2 = _swap(d, chd, ihd, ihp)
    return _swap(d2, ctd, itd, ihpp)


def _apply_exchange(d: GaussDiagram, m: GMove) -> GaussDiagram:
    comp, pos = m.comp, _norm_index(d, m.comp, m.pos)
    seq = d.components[comp]
    if m.forward:
        nxt = _succ(d, comp, pos)
        if nxt is None:
            raise GaussMoveError("exchange: nothing to push through")
        moved, head = pos, nxt
    else:
        prv = None
        n = len(seq)
        if d.kind == LINK and n > 1:
            prv = (pos - 1) % n
        elif pos > 0:
            prv = pos - 1
        if prv is None:
            raise GaussMoveError("exchange: nothing to push through")
        moved, head = pos, prv
    if seq[head][0] != "h":
        raise GaussMoveError(f"exchange: token at {head} is not a head")
    a2 = seq[head][1]
    x = seq[moved][1]
    if a2 == x:
        raise GaussMoveError("exchange: cannot push an endpoint through its own head")
    eta = d.signs[a2]
    other = ("h", x) if seq[moved][0] == "t" else ("t", x)
    d2 = _swap(d, comp, moved, head)
    oc, op = d2.find(other)
    k1 = d2.fresh_arrow()
    k2 = k1 + 1
    tb_c, tb_lo, tb_len = tail_block(d2, a2)
    s1 = eta if m.forward else -eta
    d2 = _insert_tokens(d2, [(oc, op, [("h", k1)]), (oc, op + 1, [("h", k2)]),
                             (tb_c, tb_lo + tb_len, [("t", k1), ("t", k2)])])
    d2.signs[k1] = s1
    d2.signs[k2] = -s1
    d2.validate()
    return d2


def _apply_sv_insert(d: GaussDiagram, m: GMove) -> GaussDiagram:
    if m.sign not in (1, -1):
        raise GaussMoveError("sv: sign must be +1 or -1")
    k = d.fresh_arrow()
    if m.tail_pos == m.head_pos:
        inserts = [(m.comp, m.tail_pos, [("t", k), ("h", k)])]
    else:
        inserts = [(m.comp, m.tail_pos, [("t", k)]),
                   (m.comp, m.head_pos, [("h", k)])]
    d2 = _insert_tokens(d, inserts)
    d2.signs[k] = m.sign
    d2.validate()
    return d2


def _apply_sv_delete(d: GaussDiagram, m: GMove) -> GaussDiagram:
    k = m.arrow
    ct, _ = d.find(("t", k))
    ch, _ = d.find(("h", k))
    if ct != ch:
        raise GaussMoveError(f"sv: arrow {k} is not a self-arrow")
    d2 = _delete_tokens(d, [("t", k), ("h", k)])
    del d2.signs[k]
    return d2


def _apply_gr(d: GaussDiagram, m: GMove) -> GaussDiagram:
    if d.kind != LINK:
        raise GaussMoveError("gr: global reversal applies to links only")
    comp = m.comp
    if not 0 <= comp < len(d.components):
        raise GaussMoveError(f"no component {comp}")
    comps = list(d.components)
    comps[comp] = tuple(reversed(comps[comp]))
    signs = dict(d.signs)
    for what, k in comps[comp]:
        if what == "h":
            signs[k] = -signs[k]
    return GaussDiagram(d.kind, tuple(comps), signs)


_G_APPLIERS = {
    "reid1_insert": _apply_reid1_insert,
    "reid1_delete": _apply_reid1_delete,
    "reid2_insert": _apply_reid2_insert,
    "reid2_delete": _apply_reid2_delete,
    "reid3": _apply_reid3,
    "tc": _apply_tc,
    "exchange": _apply_exchange,
    "sv_insert": _apply_sv_insert,
    "sv_delete": _apply_sv_delete,
    "gr": _apply_gr,
}


def apply_gauss_move(d: GaussDiagram, m: GMove) -> GaussDiagram:
    if m.kind == "upsilon":
        return apply_upsilon(d, m.instance, m.rightward)
    if m.kind not in _G_APPLIERS:
        raise GaussMoveError(f"unknown move kind {m.kind!r}")
    return _G_APPLIERS[m.kind](d, m)


def apply_gauss_moves(d: GaussDiagram, moves: Iterable[GMove]) -> GaussDiagram:
    for m in moves:
        d = apply_gauss_move(d, m)
    return d


# ---------------------------------------------------------------------------
# the star lemma: relocating a tail across a trivial separating word


def _freely_trivial(word: list[tuple[int, int, int]]) -> bool:
    stack: list[tuple[int, int]] = []
    for _, sign, block in word:
        if stack and stack[-1] == (block, -sign):
            stack.pop()
        else:
            stack.append((block, sign))
    return not stack


def lemma_star(d: GaussDiagram, comp: int, pos: int, target: int
               ) -> tuple[GaussDiagram, list[GMove]]:
    """Move the tail at (comp, pos) forward to sit just before the token
    currently at ``target``; legal when the separating head word is freely
    trivial.  Returns the rewritten diagram and the realizing move trace."""
    pos = _norm_index(d, comp, pos)
    target = _norm_index(d, comp, target, insert=True)
    seq = d.components[comp]
    if seq[pos][0] != "t":
        raise GaussMoveError(f"lemma_star: token at {pos} is not a tail")
    x = seq[pos][1]
    word = head_word_between(d, comp, pos, target)
    if any(k == x for k, _, _ in word):
        raise GaussMoveError("lemma_star: the moved arrow's own head separates the positions")
    if word and target < len(seq) and seq[target] == ("h", x):
        raise GaussMoveError("lemma_star: target is the moved arrow's own head")
    if not _freely_trivial(word):
        raise GaussMoveError("lemma_star: separating head word is not trivial")
    trace: list[GMove] = []
    created: set[int] = set()
    cur = d
    target_tok = seq[target] if target < len(seq) else None
    while True:
        here = cur.find(("t", x))[1]
        nxt = _succ(cur, comp, here)
        if nxt is None:
            if target_tok is None:
                break
            raise AssertionError("lemma_star: ran off the strand")
        tok = cur.components[comp][nxt]
        if tok == target_tok:
            break
        if tok[0] == "t":
            mv = tc(comp, here)
            trace.append(mv)
            cur = _apply_tc(cur, mv)
        else:
            k1 = cur.fresh_arrow()
            mv = exchange(comp, here, forward=True)
            trace.append(mv)
            cur = _apply_exchange(cur, mv)
            created.update({k1, k1 + 1})
    # all conjugating arrows cancel in pairs since the word was trivial
    while created:
        progressed = False
        for ci, compseq in enumerate(cur.components):
            n = len(compseq)
            for i in range(n):
                j = _succ(cur, ci, i)
                if j is None:
                    continue
                (w1, k1), (w2, k2) = compseq[i], compseq[j]
                if (w1 == w2 == "h" and k1 in created and k2 in created
                        and cur.signs[k1] == -cur.signs[k2]
                        and _same_block(cur, k1, k2)):
                    # walk the tails together, then cancel
                    c1, t1 = cur.find(("t", k1))
                    _, t2 = cur.find(("t", k2))
                    while abs(t1 - t2) > 1:
                        lo = min(t1, t2)
                        mv = tc(c1, lo)
                        trace.append(mv)
                        cur = _apply_tc(cur, mv)
                        c1, t1 = cur.find(("t", k1))
                        _, t2 = cur.find(("t", k2))
                    mv = reid2_delete(k1, k2)
                    trace.append(mv)
                    cur = _apply_reid2_delete(cur, mv)
                    created.discard(k1)
                    created.discard(k2)
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            raise AssertionError("lemma_star: conjugating arrows failed to cancel")
    return cur, trace


# ---------------------------------------------------------------------------
# the hula-hoop move


@dataclass(frozen=True)
class UpsilonInstance:
    """Addresses one hula-hoop pattern.

    On ``comp``, reading from ``start``:

        t(A) t(B) [w̄ heads] h(B) [B1 tails] h(C) [B2 tails] h(A) [w heads]
        [B3 tails] h(D)

    with t(C) t(D) adjacent at ``eta_tails`` (component, position) and signs
    A: eps, B: -eps, C: eta, D: -eta.  The word arrows pair up (the k-th of w̄
    against the mirror of w, opposite signs, same tail block) and none of the
    bunch arrows is an arrow of w.

    The move exchanges the two interlocked hoops: the head pairs swap within
    their slots (h(B) with h(C), h(A) with h(D)) and the two adjacent tail
    pairs trade places, so the right-hand side is the same pattern for the
    hoops (D, C) and (B, A), i.e. with (eps, eta) replaced by (-eta, -eps).
    In the special shape w = 1, eta = -eps with only the four self-arrows,
    the two sides are related by Reidemeister moves alone.
    """

    comp: int
    start: int
    w_len: int
    b1: int
    b2: int
    b3: int
    eta_tails: tuple[int, int]


def _upsilon_layout(d: GaussDiagram, ins: UpsilonInstance, rightward: bool):
    comp = ins.comp
    if not 0 <= comp < len(d.components):
        raise GaussMoveError(f"no component {comp}")
    seq = d.components[comp]
    n = len(seq)
    idx = ins.start
    slots: dict[str, Any] = {}

    def take(count, name):
        nonlocal idx
        slots[name] = list(range(idx, idx + count))
        idx += count

    take(2, "pair")
    take(ins.w_len, "wbar")
    take(1, "hB")
    take(ins.b1, "B1")
    take(1, "hC")
    take(ins.b2, "B2")
    take(1, "hA")
    take(ins.w_len, "w")
    take(ins.b3, "B3")
    take(1, "hD")
    if ins.start < 0 or idx > n:
        raise GaussMoveError("upsilon: pattern does not fit the component")

    def at(i):
        return seq[i]

    return slots, at


def _check_upsilon(d: GaussDiagram, ins: UpsilonInstance, rightward: bool):
    slots, at = _upsilon_layout(d, ins, rightward)
    pair = [at(i) for i in slots["pair"]]
    if [w for w, _ in pair] != ["t", "t"]:
        raise GaussMoveError("upsilon: hoop tails must be two adjacent tails")
    hB = at(slots["hB"][0])
    hC = at(slots["hC"][0])
    hA = at(slots["hA"][0])
    hD = at(slots["hD"][0])
    for tok in (hA, hB, hC, hD):
        if tok[0] != "h":
            raise GaussMoveError("upsilon: hoop head slots must hold heads")
    a, b = hA[1], hB[1]
    c, dd = hC[1], hD[1]
    if {pair[0][1], pair[1][1]} != {a, b}:
        raise GaussMoveError("upsilon: hoop heads do not match the tail pair")
    eps = d.signs[a]
    eta = d.signs[c]
    if d.signs[b] != -eps or d.signs[dd] != -eta:
        raise GaussMoveError("upsilon: hoop signs must be opposite")
    ec, ep = ins.eta_tails
    ep = _norm_index(d, ec, ep)
    et = d.components[ec][ep]
    nxt = _succ(d, ec, ep)
    if nxt is None or {et, d.components[ec][nxt]} != {("t", c), ("t", dd)}:
        raise GaussMoveError("upsilon: crossing hoop tails are not adjacent")
    wbar = [at(i) for i in slots["wbar"]]
    w = [at(i) for i in slots["w"]]
    if any(t[0] != "h" for t in wbar + w):
        raise GaussMoveError("upsilon: word slots must hold heads")
    warrows = {t[1] for t in wbar + w}
    if len(warrows) != 2 * ins.w_len:
        raise GaussMoveError("upsilon: word arrows must be distinct")
    for k in range(ins.w_len):
        k1 = wbar[k][1]
        k2 = w[ins.w_len - 1 - k][1]
        if d.signs[k1] != -d.signs[k2] or not _same_block(d, k1, k2):
            raise GaussMoveError("upsilon: word bunches are not mutually inverse")
    bunches = [at(i) for i in slots["B1"] + slots["B2"] + slots["B3"]]
    if any(t[0] != "t" for t in bunches):
        raise GaussMoveError("upsilon: bunch slots must hold tails")
    bunch_arrows = {t[1] for t in bunches}
    if bunch_arrows & warrows:
        raise GaussMoveError("upsilon: bunch tails are connected to the word")
    if bunch_arrows & {a, b, c, dd}:
        raise GaussMoveError("upsilon: bunch tails reuse a hoop arrow")
    return slots, at, (a, b)


def apply_upsilon(d: GaussDiagram, ins: UpsilonInstance, rightward: bool = True
                  ) -> GaussDiagram:
    """Exchange the two interlocked hoops of the pattern.

    The move is an involution; ``rightward`` only records which of the two
    sides the instance currently matches.
    """
    slots, at, (a, b) = _check_upsilon(d, ins, rightward)
    comp = ins.comp
    seq = list(d.components[comp])
    iB, iC, iA, iD = (slots["hB"][0], slots["hC"][0], slots["hA"][0],
                      slots["hD"][0])
    seq[iB], seq[iC] = seq[iC], seq[iB]
    seq[iA], seq[iD] = seq[iD], seq[iA]
    ec, ep = ins.eta_tails
    pair_idx = slots["pair"]
    ep = _norm_index(d, ec, ep)
    if ec == comp:
        ep2 = _succ(d, ec, ep)
        seq[pair_idx[0]], seq[ep] = seq[ep], seq[pair_idx[0]]
        seq[pair_idx[1]], seq[ep2] = seq[ep2], seq[pair_idx[1]]
        return _with_component(d, comp, seq)
    other = list(d.components[ec])
    ep2 = _succ(d, ec, ep)
    seq[pair_idx[0]], other[ep] = other[ep], seq[pair_idx[0]]
    seq[pair_idx[1]], other[ep2] = other[ep2], seq[pair_idx[1]]
    d2 = _with_component(d, comp, seq)
    return _with_component(d2, ec, other)
