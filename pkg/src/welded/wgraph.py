"""w-graphs and the move engine.

A w-graph is an oriented graph whose edges carry words in the free group on
the vertex set, with ordered connected components and, per component, ordered
marked vertices.  Moves come in three families:

* primitive: contract, expand, reverse (orientation reversal), stabilize,
  reid1, reid3 — these generate welded equivalence;
* derived: push, split, merge, gen_stabilize, rephrased_reid3 — consequences
  of the primitives; ``expand_macro`` produces a primitive sequence whose
  composition equals the direct implementation;
* self_virtualize — not a welded move; generates sv-equivalence together with
  the others.

Graphs are immutable values; every move returns a new graph.  Graph equality
compares vertex ids, marks, component data and the multiset of (src, dst,
label) edges; edge ids and fresh-id counters are bookkeeping only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import words
from .words import Word, concat, invert, reduce, substitute

PRIMITIVE_KINDS = ("contract", "expand", "reverse", "stabilize", "reid1", "reid3")
DERIVED_KINDS = ("push", "split", "merge", "gen_stabilize", "rephrased_reid3")
MOVE_KINDS = PRIMITIVE_KINDS + DERIVED_KINDS + ("self_virtualize",)


class MoveError(ValueError):
    """A move's side conditions are violated or its parameters are malformed."""


@dataclass(frozen=True)
class Edge:
    eid: int
    src: int
    dst: int
    label: Word

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    def triple(self) -> tuple[int, int, Word]:
        return (self.src, self.dst, self.label)


@dataclass(frozen=True)
class Move:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None

    def to_json(self) -> dict[str, Any]:
        out = {"kind": self.kind}
        out.update(self.params)
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Move":
        data = dict(data)
        kind = data.pop("kind", None)
        if kind not in MOVE_KINDS:
            raise MoveError(f"unknown move kind {kind!r}")
        for key in ("word", "label"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        if "moved" in data:
            data["moved"] = tuple((eid, end) for eid, end in data["moved"])
        if "occs" in data:
            data["occs"] = tuple((eid, pos) for eid, pos in data["occs"])
        return cls(kind, data)


def contract(edge: int) -> Move:
    return Move("contract", {"edge": edge})


def expand(vertex: int, moved: Iterable[tuple[int, str]] = (),
           occs: Iterable[tuple[int, int]] = (), new_src_is_new: bool = False,
           new_vertex: int | None = None) -> Move:
    return Move("expand", {"vertex": vertex, "moved": tuple(moved),
                           "occs": tuple(occs), "new_src_is_new": new_src_is_new,
                           "new_vertex": new_vertex})


def reverse(edge: int) -> Move:
    return Move("reverse", {"edge": edge})


def stabilize(vertex: int, letter: int) -> Move:
    return Move("stabilize", {"vertex": vertex, "letter": letter})


def reid1(edge: int, sign: int) -> Move:
    return Move("reid1", {"edge": edge, "sign": sign})


def reid3(edge: int, witness: int, rev: bool = False) -> Move:
    return Move("reid3", {"edge": edge, "witness": witness, "reverse": rev})


def push(vertex: int, word: Sequence[int]) -> Move:
    return Move("push", {"vertex": vertex, "word": tuple(word)})


def split(edge: int, cut: int) -> Move:
    return Move("split", {"edge": edge, "cut": cut})


def merge(vertex: int) -> Move:
    return Move("merge", {"vertex": vertex})


def gen_stabilize(vertex: int, letter: int) -> Move:
    return Move("gen_stabilize", {"vertex": vertex, "letter": letter})


def rephrased_reid3(edge: int, pos: int, witness: int, rot: int = 0,
                    inverted: bool = False) -> Move:
    return Move("rephrased_reid3", {"edge": edge, "pos": pos, "witness": witness,
                                    "rot": rot, "inverted": inverted})


def self_virtualize(edge: int, letter: int, delete: bool = False) -> Move:
    return Move("self_virtualize", {"edge": edge, "letter": letter, "delete": delete})


class WGraph:
    """Immutable decorated graph with ordered components and marked vertices."""

    __slots__ = ("vcomp", "marked", "marked_order", "edges", "next_vid", "next_eid",
                 "_edges_by_id")

    def __init__(self, vcomp: dict[int, int], marked: frozenset[int],
                 marked_order: tuple[tuple[int, ...], ...], edges: tuple[Edge, ...],
                 next_vid: int, next_eid: int):
        self.vcomp = vcomp
        self.marked = marked
        self.marked_order = marked_order
        self.edges = edges
        self.next_vid = next_vid
        self.next_eid = next_eid
        self._edges_by_id = {e.eid: e for e in edges}

    @classmethod
    def build(cls, vertices: Sequence[tuple[int, int, bool]],
              edges: Sequence[tuple[int, int, Sequence[int]]]) -> "WGraph":
        """vertices: (id, component, marked) in declaration order; edges: (src, dst, label)."""
        vcomp: dict[int, int] = {}
        marked = set()
        ncomp = 1 + max((c for _, c, _ in vertices), default=-1)
        order: list[list[int]] = [[] for _ in range(ncomp)]
        for vid, comp, is_marked in vertices:
            if vid in vcomp:
                raise ValueError(f"duplicate vertex {vid}")
            vcomp[vid] = comp
            if is_marked:
                marked.add(vid)
                order[comp].append(vid)
        edge_objs = tuple(Edge(k, src, dst, reduce(label))
                          for k, (src, dst, label) in enumerate(edges))
        g = cls(vcomp, frozenset(marked), tuple(tuple(o) for o in order), edge_objs,
                next_vid=1 + max(vcomp, default=0), next_eid=len(edge_objs))
        g.validate()
        return g

    # -- accessors ---------------------------------------------------------

    @property
    def ncomps(self) -> int:
        return len(self.marked_order)

    def edge(self, eid: int) -> Edge:
        try:
            return self._edges_by_id[eid]
        except KeyError:
            raise MoveError(f"no edge with id {eid}") from None

    def has_vertex(self, vid: int) -> bool:
        return vid in self.vcomp

    def edges_at(self, vid: int) -> list[Edge]:
        return [e for e in self.edges if e.src == vid or e.dst == vid]

    def degree(self, vid: int) -> int:
        return sum((e.src == vid) + (e.dst == vid) for e in self.edges)

    def vertex_in_labels(self, vid: int) -> Edge | None:
        for e in self.edges:
            if any(abs(let) == vid for let in e.label):
                return e
        return None

    def component_vertices(self, comp: int) -> list[int]:
        return sorted(v for v, c in self.vcomp.items() if c == comp)

    def component_edges(self, comp: int) -> list[Edge]:
        return [e for e in self.edges if self.vcomp[e.src] == comp]

    def graph_type(self) -> tuple[tuple[int, int], ...]:
        """Per component (marked-vertex count, first Betti number)."""
        nv = [0] * self.ncomps
        ne = [0] * self.ncomps
        for v, c in self.vcomp.items():
            nv[c] += 1
        for e in self.edges:
            ne[self.vcomp[e.src]] += 1
        return tuple((len(self.marked_order[c]), ne[c] - nv[c] + 1)
                     for c in range(self.ncomps))

    def content(self):
        return (tuple(sorted(self.vcomp.items())), self.marked, self.marked_order,
                tuple(sorted(e.triple() for e in self.edges)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WGraph):
            return NotImplemented
        return self.content() == other.content()

    def __hash__(self):
        return hash(self.content())

    def __repr__(self):
        vs = " ".join(f"{v}{'*' if v in self.marked else ''}@{c}"
                      for v, c in sorted(self.vcomp.items()))
        es = "; ".join(f"{e.src}->{e.dst}:{words.format_word(e.label)}"
                       for e in self.edges)
        return f"WGraph({vs} | {es})"

    # -- invariants --------------------------------------------------------

    def validate(self) -> None:
        for v in self.vcomp:
            if v <= 0:
                raise ValueError(f"vertex id {v} must be positive")
        for e in self.edges:
            if e.src not in self.vcomp or e.dst not in self.vcomp:
                raise ValueError(f"edge {e.eid} has endpoint outside the graph")
            if self.vcomp[e.src] != self.vcomp[e.dst]:
                raise ValueError(f"edge {e.eid} joins distinct components")
            if reduce(e.label) != e.label:
                raise ValueError(f"edge {e.eid} label is not reduced")
            for let in e.label:
                if abs(let) not in self.vcomp:
                    raise ValueError(f"edge {e.eid} label mentions non-vertex {abs(let)}")
        comps = set(self.vcomp.values())
        if comps and comps != set(range(self.ncomps)):
            raise ValueError("component indices must be 0..ncomps-1")
        for c in range(self.ncomps):
            verts = set(self.component_vertices(c))
            if not verts:
                raise ValueError(f"component {c} is empty")
            if set(self.marked_order[c]) != {v for v in verts if v in self.marked}:
                raise ValueError(f"marked order of component {c} is inconsistent")
            if len(set(self.marked_order[c])) != len(self.marked_order[c]):
                raise ValueError(f"marked order of component {c} repeats a vertex")
            seen = {min(verts)}
            frontier = [min(verts)]
            adj: dict[int, list[int]] = {v: [] for v in verts}
            for e in self.edges:
                if self.vcomp[e.src] == c:
                    adj[e.src].append(e.dst)
                    adj[e.dst].append(e.src)
            while frontier:
                v = frontier.pop()
                for u in adj[v]:
                    if u not in seen:
                        seen.add(u)
                        frontier.append(u)
            if seen != verts:
                raise ValueError(f"component {c} is not connected")
        if self.vcomp and self.next_vid <= max(self.vcomp):
            raise ValueError("fresh vertex counter lags behind vertex ids")
        if self.edges and self.next_eid <= max(e.eid for e in self.edges):
            raise ValueError("fresh edge counter lags behind edge ids")

    # -- rebuilding helpers --------------------------------------------------

    def _replace(self, *, vcomp=None, marked=None, marked_order=None, edges=None,
                 next_vid=None, next_eid=None) -> "WGraph":
        return WGraph(
            self.vcomp if vcomp is None else vcomp,
            self.marked if marked is None else marked,
            self.marked_order if marked_order is None else marked_order,
            self.edges if edges is None else edges,
            self.next_vid if next_vid is None else next_vid,
            self.next_eid if next_eid is None else next_eid,
        )


# ---------------------------------------------------------------------------
# move application


def _apply_contract(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    if e.label != ():
        raise MoveError(f"contract: edge {e.eid} is not empty")
    if e.is_loop:
        raise MoveError(f"contract: edge {e.eid} is a loop")
    if e.dst in g.marked:
        raise MoveError(f"contract: vertex {e.dst} is marked")
    a, b = e.src, e.dst
    vcomp = dict(g.vcomp)
    del vcomp[b]
    new_edges = []
    for f in g.edges:
        if f.eid == e.eid:
            continue
        src = a if f.src == b else f.src
        dst = a if f.dst == b else f.dst
        label = substitute(f.label, b, (a,)) if any(abs(x) == b for x in f.label) else f.label
        new_edges.append(Edge(f.eid, src, dst, label))
    return g._replace(vcomp=vcomp, edges=tuple(new_edges))


def _apply_expand(g: WGraph, m: Move) -> WGraph:
    v = m.vertex
    if not g.has_vertex(v):
        raise MoveError(f"expand: no vertex {v}")
    u = g.next_vid
    if m.params.get("new_vertex") not in (None, u):
        raise MoveError(f"expand: fresh vertex would be {u}, not {m.params['new_vertex']}")
    moved: dict[int, set[str]] = {}
    for eid, end in m.moved:
        if end not in ("src", "dst"):
            raise MoveError(f"expand: bad endpoint tag {end!r}")
        f = g.edge(eid)
        if getattr(f, end) != v:
            raise MoveError(f"expand: edge {eid} {end} is not {v}")
        moved.setdefault(eid, set()).add(end)
    occs: dict[int, set[int]] = {}
    for eid, pos in m.occs:
        f = g.edge(eid)
        if not (0 <= pos < len(f.label)) or abs(f.label[pos]) != v:
            raise MoveError(f"expand: edge {eid} position {pos} is not an occurrence of {v}")
        occs.setdefault(eid, set()).add(pos)
    new_edges = []
    for f in g.edges:
        src = u if ("src" in moved.get(f.eid, ()) and f.src == v) else f.src
        dst = u if ("dst" in moved.get(f.eid, ()) and f.dst == v) else f.dst
        if f.eid in occs:
            label = tuple((u if let > 0 else -u) if k in occs[f.eid] else let
                          for k, let in enumerate(f.label))
        else:
            label = f.label
        new_edges.append(Edge(f.eid, src, dst, label))
    eps = Edge(g.next_eid, u, v, ()) if m.new_src_is_new else Edge(g.next_eid, v, u, ())
    new_edges.append(eps)
    vcomp = dict(g.vcomp)
    vcomp[u] = g.vcomp[v]
    return g._replace(vcomp=vcomp, edges=tuple(new_edges),
                      next_vid=u + 1, next_eid=g.next_eid + 1)


def _apply_reverse(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    new = Edge(e.eid, e.dst, e.src, invert(e.label))
    return g._replace(edges=tuple(new if f.eid == e.eid else f for f in g.edges))


def _check_stab_vertex(g: WGraph, v: int, kind: str) -> None:
    if not g.has_vertex(v):
        raise MoveError(f"{kind}: no vertex {v}")
    if v in g.marked:
        raise MoveError(f"{kind}: vertex {v} is marked")
    for e in g.edges_at(v):
        if not e.is_loop and e.src != v:
            raise MoveError(f"{kind}: edge {e.eid} is not oriented outward at {v}")


def _apply_stabilize(g: WGraph, m: Move) -> WGraph:
    v, p = m.vertex, m.letter
    _check_stab_vertex(g, v, "stabilize")
    if not g.has_vertex(abs(p)):
        raise MoveError(f"stabilize: prefix letter {abs(p)} is not a vertex")
    used = g.vertex_in_labels(v)
    if used is not None:
        raise MoveError(f"stabilize: vertex {v} occurs in the label of edge {used.eid}")
    new_edges = []
    for e in g.edges:
        if e.src != v and e.dst != v:
            new_edges.append(e)
        elif e.is_loop:
            new_edges.append(Edge(e.eid, v, v, concat((p,), e.label, (-p,))))
        else:
            new_edges.append(Edge(e.eid, v, e.dst, concat((p,), e.label)))
    return g._replace(edges=tuple(new_edges))


def _apply_reid1(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    if m.sign not in (1, -1):
        raise MoveError("reid1: sign must be +1 or -1")
    new = Edge(e.eid, e.src, e.dst, concat((m.sign * e.src,), e.label))
    return g._replace(edges=tuple(new if f.eid == e.eid else f for f in g.edges))


def _apply_reid3(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    wit = g.edge(m.witness)
    if e.eid == wit.eid:
        raise MoveError("reid3: edge and witness must differ")
    a, b, w = wit.src, wit.dst, wit.label
    if m.params["reverse"]:
        pattern, result = concat(w, (b,)), concat((a,), w)
    else:
        pattern, result = concat((a,), w), concat(w, (b,))
    if e.label != pattern:
        raise MoveError(f"reid3: edge {e.eid} label does not match the witness pattern")
    new = Edge(e.eid, e.src, e.dst, result)
    return g._replace(edges=tuple(new if f.eid == e.eid else f for f in g.edges))


def _apply_self_virtualize(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    p = m.letter
    if not g.has_vertex(abs(p)):
        raise MoveError(f"self_virtualize: letter {abs(p)} is not a vertex")
    if g.vcomp[abs(p)] != g.vcomp[e.src]:
        raise MoveError(f"self_virtualize: vertex {abs(p)} is not on the component of edge {e.eid}")
    if m.delete:
        if e.label != (p,):
            raise MoveError(f"self_virtualize: edge {e.eid} is not decorated by exactly that letter")
        new_label: Word = ()
    else:
        if e.label != ():
            raise MoveError(f"self_virtualize: edge {e.eid} is not empty")
        new_label = (p,)
    new = Edge(e.eid, e.src, e.dst, new_label)
    return g._replace(edges=tuple(new if f.eid == e.eid else f for f in g.edges))


def _check_push(g: WGraph, m: Move) -> None:
    v, w = m.vertex, m.word
    if not g.has_vertex(v):
        raise MoveError(f"push: no vertex {v}")
    if v in g.marked:
        raise MoveError(f"push: vertex {v} is marked")
    used = g.vertex_in_labels(v)
    if used is not None:
        raise MoveError(f"push: vertex {v} occurs in the label of edge {used.eid}")
    for let in w:
        if not g.has_vertex(abs(let)):
            raise MoveError(f"push: letter {abs(let)} is not a vertex")
        if abs(let) == v:
            raise MoveError(f"push: word may not mention the pushed-through vertex {v}")


def _apply_push(g: WGraph, m: Move) -> WGraph:
    _check_push(g, m)
    v, w = m.vertex, tuple(m.word)
    wbar = invert(w)
    new_edges = []
    for e in g.edges:
        if e.is_loop and e.src == v:
            new_edges.append(Edge(e.eid, v, v, concat(w, e.label, wbar)))
        elif e.src == v:
            new_edges.append(Edge(e.eid, v, e.dst, concat(w, e.label)))
        elif e.dst == v:
            new_edges.append(Edge(e.eid, e.src, v, concat(e.label, wbar)))
        else:
            new_edges.append(e)
    return g._replace(edges=tuple(new_edges))


def _apply_split(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    cut = m.cut
    if not 0 <= cut <= len(e.label):
        raise MoveError(f"split: cut {cut} out of range for edge {e.eid}")
    c = g.next_vid
    vcomp = dict(g.vcomp)
    vcomp[c] = g.vcomp[e.src]
    first = Edge(e.eid, e.src, c, e.label[:cut])
    second = Edge(g.next_eid, c, e.dst, e.label[cut:])
    new_edges = tuple(first if f.eid == e.eid else f for f in g.edges) + (second,)
    return g._replace(vcomp=vcomp, edges=new_edges,
                      next_vid=c + 1, next_eid=g.next_eid + 1)


def _merge_edges(g: WGraph, v: int) -> tuple[Edge, Edge]:
    incident = g.edges_at(v)
    if any(e.is_loop for e in incident) or len(incident) != 2:
        raise MoveError(f"merge: vertex {v} is not bivalent with distinct neighbors")
    ins = [e for e in incident if e.dst == v]
    outs = [e for e in incident if e.src == v]
    if len(ins) != 1 or len(outs) != 1:
        raise MoveError(f"merge: vertex {v} needs one inward and one outward edge")
    return ins[0], outs[0]


def _apply_merge(g: WGraph, m: Move) -> WGraph:
    v = m.vertex
    if not g.has_vertex(v):
        raise MoveError(f"merge: no vertex {v}")
    if v in g.marked:
        raise MoveError(f"merge: vertex {v} is marked")
    used = g.vertex_in_labels(v)
    if used is not None:
        raise MoveError(f"merge: vertex {v} occurs in the label of edge {used.eid}")
    e1, e2 = _merge_edges(g, v)
    joined = Edge(e2.eid, e1.src, e2.dst, concat(e1.label, e2.label))
    vcomp = dict(g.vcomp)
    del vcomp[v]
    new_edges = tuple(joined if f.eid == e2.eid else f
                      for f in g.edges if f.eid != e1.eid)
    return g._replace(vcomp=vcomp, edges=new_edges)


def _apply_gen_stabilize(g: WGraph, m: Move) -> WGraph:
    v, p = m.vertex, m.letter
    _check_stab_vertex(g, v, "gen_stabilize")
    pg = abs(p)
    if not g.has_vertex(pg):
        raise MoveError(f"gen_stabilize: prefix letter {pg} is not a vertex")
    if pg == v:
        raise MoveError("gen_stabilize: prefix letter must differ from the vertex")
    conj = (-p, v, p)
    new_edges = []
    for e in g.edges:
        label = substitute(e.label, v, conj) if any(abs(x) == v for x in e.label) else e.label
        if e.is_loop and e.src == v:
            label = concat((p,), label, (-p,))
        elif e.src == v or e.dst == v:
            label = concat((p,), label)
        new_edges.append(Edge(e.eid, e.src, e.dst, label))
    return g._replace(edges=tuple(new_edges))


def _rephrased_word(wit: Edge, rot: int, inverted: bool) -> Word:
    base = concat(invert(wit.label), (-wit.src,), wit.label, (wit.dst,))
    if inverted:
        base = invert(base)
    if base and not 0 <= rot < len(base):
        raise MoveError(f"rephrased_reid3: rotation {rot} out of range")
    if not base and rot != 0:
        raise MoveError("rephrased_reid3: rotation of an empty insertion")
    return base[rot:] + base[:rot]


def _apply_rephrased_reid3(g: WGraph, m: Move) -> WGraph:
    e = g.edge(m.edge)
    wit = g.edge(m.witness)
    if e.eid == wit.eid:
        raise MoveError("rephrased_reid3: edge and witness must differ")
    if not 0 <= m.pos <= len(e.label):
        raise MoveError(f"rephrased_reid3: position {m.pos} out of range")
    ins = _rephrased_word(wit, m.rot, m.params["inverted"])
    new = Edge(e.eid, e.src, e.dst, concat(e.label[:m.pos], ins, e.label[m.pos:]))
    return g._replace(edges=tuple(new if f.eid == e.eid else f for f in g.edges))


_APPLIERS = {
    "contract": _apply_contract,
    "expand": _apply_expand,
    "reverse": _apply_reverse,
    "stabilize": _apply_stabilize,
    "reid1": _apply_reid1,
    "reid3": _apply_reid3,
    "self_virtualize": _apply_self_virtualize,
    "push": _apply_push,
    "split": _apply_split,
    "merge": _apply_merge,
    "gen_stabilize": _apply_gen_stabilize,
    "rephrased_reid3": _apply_rephrased_reid3,
}


def apply_move(g: WGraph, m: Move) -> WGraph:
    if m.kind not in _APPLIERS:
        raise MoveError(f"unknown move kind {m.kind!r}")
    return _APPLIERS[m.kind](g, m)


def apply_moves(g: WGraph, moves: Iterable[Move]) -> WGraph:
    for m in moves:
        g = apply_move(g, m)
    return g


# ---------------------------------------------------------------------------
# macro expansion of derived moves into primitive sequences


def _emit(g: WGraph, seq: list[Move], m: Move) -> WGraph:
    seq.append(m)
    return apply_move(g, m)


def _push_macro(g: WGraph, seq: list[Move], v: int, w: Word) -> WGraph:
    _check_push(g, Move("push", {"vertex": v, "word": w}))
    in_edges = [e.eid for e in g.edges_at(v) if not e.is_loop and e.dst == v]
    for eid in in_edges:
        g = _emit(g, seq, reverse(eid))
    for p in reversed(w):
        g = _emit(g, seq, stabilize(v, p))
    for eid in in_edges:
        g = _emit(g, seq, reverse(eid))
    return g


def _split_macro(g: WGraph, seq: list[Move], eid: int, cut: int) -> tuple[WGraph, int, int]:
    """Returns (graph, fresh vertex, id of the second half)."""
    e = g.edge(eid)
    if not 0 <= cut <= len(e.label):
        raise MoveError(f"split: cut {cut} out of range for edge {eid}")
    tail = e.label[cut:]
    c = g.next_vid
    second = g.next_eid
    g = _emit(g, seq, expand(e.dst, moved=[(eid, "dst")], new_src_is_new=True))
    # the fresh empty edge runs (c, old dst); push the tail of the label through c
    g = _push_macro(g, seq, c, tail)
    assert g.edge(eid).label == e.label[:cut] and g.edge(second).label == tail
    return g, c, second


def _merge_macro(g: WGraph, seq: list[Move], v: int) -> tuple[WGraph, int]:
    e1, e2 = _merge_edges(g, v)
    g = _push_macro(g, seq, v, e1.label)
    g = _emit(g, seq, contract(e1.eid))
    return g, e2.eid


def _rephrased_macro(g: WGraph, seq: list[Move], m: Move) -> WGraph:
    e = g.edge(m.edge)
    wit = g.edge(m.witness)
    if e.eid == wit.eid:
        raise MoveError("rephrased_reid3: edge and witness must differ")
    base = concat(invert(wit.label), (-wit.src,), wit.label, (wit.dst,))
    if m.params["inverted"]:
        base = invert(base)
    if base and not 0 <= m.rot < len(base):
        raise MoveError(f"rephrased_reid3: rotation {m.rot} out of range")
    if not base:
        return g  # trivial insertion
    tail_q = base[m.rot:]
    g, v, right = _split_macro(g, seq, e.eid, m.pos)
    g = _push_macro(g, seq, v, invert(tail_q))
    left = e.eid
    # splice an empty edge after `left`, charge it with the pattern, rewrite it
    g, v2, mid = _split_macro(g, seq, left, len(g.edge(left).label))
    if m.params["inverted"]:
        g = _push_macro(g, seq, v2, concat(wit.label, (wit.dst,)))
        g = _emit(g, seq, reid3(mid, wit.eid, rev=True))
    else:
        g = _push_macro(g, seq, v2, concat((wit.src,), wit.label))
        g = _emit(g, seq, reid3(mid, wit.eid, rev=False))
    g, _ = _merge_macro(g, seq, v2)
    g = _push_macro(g, seq, v, tail_q)
    g, _ = _merge_macro(g, seq, v)
    return g


def _gen_stabilize_macro(g: WGraph, seq: list[Move], m: Move) -> WGraph:
    v, p = m.vertex, m.letter
    _check_stab_vertex(g, v, "gen_stabilize")
    if abs(p) == v:
        raise MoveError("gen_stabilize: prefix letter must differ from the vertex")
    if not g.has_vertex(abs(p)):
        raise MoveError(f"gen_stabilize: prefix letter {abs(p)} is not a vertex")
    b2 = g.next_vid
    e0 = g.next_eid
    moved = []
    for e in g.edges_at(v):
        if e.src == v:
            moved.append((e.eid, "src"))
        if e.dst == v:
            moved.append((e.eid, "dst"))
    g = _emit(g, seq, expand(v, moved=moved, new_src_is_new=False))
    g = _emit(g, seq, reverse(e0))
    g = _emit(g, seq, stabilize(b2, p))
    g = _emit(g, seq, reverse(e0))
    # witness edge e0 = (v, b2, p̄); rewrite every remaining occurrence of v
    while True:
        hit = None
        for f in g.edges:
            if f.eid == e0:
                continue
            for k, let in enumerate(f.label):
                if abs(let) == v:
                    hit = (f.eid, k, let > 0)
                    break
            if hit:
                break
        if hit is None:
            break
        feid, k, positive = hit
        if positive:
            g = _rephrased_macro(g, seq, rephrased_reid3(feid, k + 1, e0, rot=1,
                                                         inverted=False))
        else:
            g = _rephrased_macro(g, seq, rephrased_reid3(feid, k, e0, rot=3,
                                                         inverted=True))
    g = _emit(g, seq, stabilize(v, p))
    g = _emit(g, seq, contract(e0))
    return g


def expand_macro(g: WGraph, m: Move) -> list[Move]:
    """Primitive sequence whose composition equals apply_move(g, m).

    Only defined for the derived kinds; the returned moves address the graph
    they are generated for (fresh ids are baked in by simulation).
    """
    if m.kind in PRIMITIVE_KINDS or m.kind == "self_virtualize":
        raise MoveError(f"{m.kind} is not a derived move")
    if m.kind not in DERIVED_KINDS:
        raise MoveError(f"unknown move kind {m.kind!r}")
    seq: list[Move] = []
    if m.kind == "push":
        _push_macro(g, seq, m.vertex, tuple(m.word))
    elif m.kind == "split":
        _split_macro(g, seq, m.edge, m.cut)
    elif m.kind == "merge":
        if not g.has_vertex(m.vertex):
            raise MoveError(f"merge: no vertex {m.vertex}")
        if m.vertex in g.marked:
            raise MoveError(f"merge: vertex {m.vertex} is marked")
        used = g.vertex_in_labels(m.vertex)
        if used is not None:
            raise MoveError(f"merge: vertex {m.vertex} occurs in the label of edge {used.eid}")
        _merge_macro(g, seq, m.vertex)
    elif m.kind == "gen_stabilize":
        _gen_stabilize_macro(g, seq, m)
    elif m.kind == "rephrased_reid3":
        if not 0 <= m.pos <= len(g.edge(m.edge).label):
            raise MoveError(f"rephrased_reid3: position {m.pos} out of range")
        _rephrased_macro(g, seq, m)
    return seq


# ---------------------------------------------------------------------------
# reduced form and isomorphism


def to_reduced_form(g: WGraph) -> tuple[WGraph, list[Move]]:
    """Equivalent graph with one-letter labels, loop-only empty edges where
    contraction allows, and univalent marked vertices; returns the move trace."""
    trace: list[Move] = []
    while True:
        action = None
        for e in g.edges:
            if e.label == () and not e.is_loop:
                for ordered in (False, True):
                    f = g.edge(e.eid)
                    rem, keep = (f.src, f.dst) if ordered else (f.dst, f.src)
                    if rem in g.marked:
                        continue
                    after = g.degree(keep) - 1 + g.degree(rem) - 1
                    if keep in g.marked and after >= 2:
                        continue
                    if ordered:
                        g = _emit(g, trace, reverse(e.eid))
                    g = _emit(g, trace, contract(e.eid))
                    action = True
                    break
                if action:
                    break
        if action:
            continue
        for e in g.edges:
            if len(e.label) >= 2:
                g = _emit(g, trace, split(e.eid, 1))
                action = True
                break
        if action:
            continue
        for v in sorted(g.marked):
            if g.degree(v) >= 2:
                moved = []
                for e in g.edges_at(v):
                    if e.src == v:
                        moved.append((e.eid, "src"))
                    if e.dst == v:
                        moved.append((e.eid, "dst"))
                g = _emit(g, trace, expand(v, moved=moved, new_src_is_new=False))
                action = True
                break
        if not action:
            return g, trace


def _vertex_signature(g: WGraph, v: int):
    inc = []
    for e in g.edges_at(v):
        kind = "loop" if e.is_loop else ("out" if e.src == v else "in")
        inc.append((kind, len(e.label), tuple(1 if x > 0 else -1 for x in e.label)))
    uses = sum(1 for e in g.edges for let in e.label if abs(let) == v)
    return (g.vcomp[v], v in g.marked, tuple(sorted(inc)), uses)


def is_isomorphic(g: WGraph, h: WGraph) -> bool:
    """Label-compatible bijection preserving component order, marked order and
    edge orientations."""
    if g.ncomps != h.ncomps or g.graph_type() != h.graph_type():
        return False
    if len(g.vcomp) != len(h.vcomp) or len(g.edges) != len(h.edges):
        return False
    gsig = {v: _vertex_signature(g, v) for v in g.vcomp}
    hsig = {v: _vertex_signature(h, v) for v in h.vcomp}
    if sorted(gsig.values()) != sorted(hsig.values()):
        return False
    mapping: dict[int, int] = {}
    for c in range(g.ncomps):
        if len(g.marked_order[c]) != len(h.marked_order[c]):
            return False
        for a, b in zip(g.marked_order[c], h.marked_order[c]):
            if gsig[a] != hsig[b]:
                return False
            mapping[a] = b
    g_unmarked = sorted((v for v in g.vcomp if v not in g.marked),
                        key=lambda v: (g.vcomp[v], v))
    h_by_comp: dict[int, list[int]] = {}
    for v in h.vcomp:
        if v not in h.marked:
            h_by_comp.setdefault(h.vcomp[v], []).append(v)

    def edges_ok(sigma: dict[int, int]) -> bool:
        want = sorted((sigma[e.src], sigma[e.dst],
                       tuple((1 if x > 0 else -1) * sigma[abs(x)] for x in e.label))
                      for e in g.edges)
        have = sorted((e.src, e.dst, e.label) for e in h.edges)
        return want == have

    def backtrack(k: int, used: set[int]) -> bool:
        if k == len(g_unmarked):
            return edges_ok(mapping)
        v = g_unmarked[k]
        for w in h_by_comp.get(g.vcomp[v], ()):
            if w in used or hsig[w] != gsig[v]:
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(k + 1, used):
                return True
            used.discard(w)
            del mapping[v]
        return False

    return backtrack(0, set())
