"""Basings, longitudes, peripheral systems and the Chen-Milnor normal form.

A basing fixes, per component, a meridian vertex, loops generating the
component's cycle space and arcs from the meridian to each marked vertex.
Path words turn those into longitudes; the preferred normalization prepends
mu^{-k} so the own-component weight vanishes.

``chen_milnor_normal_form`` rewrites a graph, through welded moves and
self-virtualizations, into one unmarked hub per component carrying all loops,
with one spoke per marked vertex; afterwards every label is a word in the hub
generators alone.  The full move trace is recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import wgraph as wg
from .wgraph import Edge, Move, MoveError, WGraph
from .words import Word, component_weight, concat, invert, reduce

PathStep = tuple[int, bool]  # (edge id, traversed along its orientation)
Path = tuple[PathStep, ...]


@dataclass(frozen=True)
class Basing:
    meridians: tuple[int, ...]
    loops: tuple[tuple[Path, ...], ...]
    arcs: tuple[tuple[Path, ...], ...]


@dataclass(frozen=True)
class PeripheralSystem:
    presentation: object
    meridians: tuple[Word, ...]
    loop_longitudes: tuple[tuple[Word, ...], ...]
    arc_longitudes: tuple[tuple[Word, ...], ...]

    def __eq__(self, other):
        if not isinstance(other, PeripheralSystem):
            return NotImplemented
        return (self.presentation == other.presentation
                and self.meridians == other.meridians
                and tuple(tuple(sorted(ls)) for ls in self.loop_longitudes)
                == tuple(tuple(sorted(ls)) for ls in other.loop_longitudes)
                and self.arc_longitudes == other.arc_longitudes)

    __hash__ = None


def step_ends(g: WGraph, step: PathStep) -> tuple[int, int]:
    e = g.edge(step[0])
    return (e.src, e.dst) if step[1] else (e.dst, e.src)


def path_word(g: WGraph, path: Iterable[PathStep]) -> Word:
    """Signed concatenation of the traversed labels."""
    out: Word = ()
    prev_end: int | None = None
    for step in path:
        start, end = step_ends(g, step)
        if prev_end is not None and start != prev_end:
            raise MoveError(f"path breaks at edge {step[0]}: {prev_end} != {start}")
        e = g.edge(step[0])
        out = concat(out, e.label if step[1] else invert(e.label))
        prev_end = end
    return out


def _tree_parents(g: WGraph, root: int) -> dict[int, PathStep]:
    """Depth-first spanning tree of root's component; edges tried by id."""
    comp = g.vcomp[root]
    adj: dict[int, list[tuple[int, PathStep]]] = {}
    for e in sorted(g.component_edges(comp), key=lambda e: e.eid):
        if e.is_loop:
            continue
        adj.setdefault(e.src, []).append((e.dst, (e.eid, True)))
        adj.setdefault(e.dst, []).append((e.src, (e.eid, False)))
    parents: dict[int, PathStep] = {}
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for u, step in reversed(adj.get(v, [])):
            if u not in seen:
                seen.add(u)
                parents[u] = step
                stack.append(u)
    return parents


def _tree_path(g: WGraph, parents: dict[int, PathStep], root: int, v: int) -> Path:
    steps = []
    while v != root:
        if v not in parents:
            raise MoveError(f"vertex {v} unreachable from {root}")
        step = parents[v]
        steps.append(step)
        start, _ = step_ends(g, step)
        v = start
    return tuple(reversed(steps))


def _reversed_path(g: WGraph, path: Path) -> Path:
    return tuple((eid, not fwd) for eid, fwd in reversed(path))


def canonical_basing(g: WGraph) -> Basing:
    """Minimal marked vertex as meridian (least id if no marks); DFS tree arcs;
    fundamental cycles of non-tree edges, ordered by edge id, as loops."""
    meridians = []
    loops = []
    arcs = []
    for c in range(g.ncomps):
        mu = g.marked_order[c][0] if g.marked_order[c] else min(g.component_vertices(c))
        meridians.append(mu)
        parents = _tree_parents(g, mu)
        tree_eids = {step[0] for step in parents.values()}
        comp_loops = []
        for e in sorted(g.component_edges(c), key=lambda e: e.eid):
            if e.eid in tree_eids:
                continue
            to_src = _tree_path(g, parents, mu, e.src)
            back = _reversed_path(g, _tree_path(g, parents, mu, e.dst))
            comp_loops.append(to_src + ((e.eid, True),) + back)
        loops.append(tuple(comp_loops))
        arcs.append(tuple(_tree_path(g, parents, mu, m) for m in g.marked_order[c]))
    return Basing(tuple(meridians), tuple(loops), tuple(arcs))


def preferred_word(g: WGraph, mu: int, w: Word) -> Word:
    """mu^{-|w|_c} · w, killing the own-component algebraic letter count."""
    k = component_weight(w, g.vcomp, g.vcomp[mu])
    return reduce((-mu if k > 0 else mu,) * abs(k) + w)


def preferred_longitudes(g: WGraph, basing: Basing) -> PeripheralSystem:
    from .wirtinger import from_wgraph

    loop_words = []
    arc_words = []
    for c in range(g.ncomps):
        mu = basing.meridians[c]
        loop_words.append(tuple(preferred_word(g, mu, path_word(g, p))
                                for p in basing.loops[c]))
        arc_words.append(tuple(preferred_word(g, mu, path_word(g, p))
                               for p in basing.arcs[c]))
    return PeripheralSystem(from_wgraph(g), tuple((m,) for m in basing.meridians),
                            tuple(loop_words), tuple(arc_words))


# ---------------------------------------------------------------------------
# peripheral-system equivalence rewrites


def apply_peripheral_equivalence(ps: PeripheralSystem, op) -> PeripheralSystem:
    """op is a tuple: ("conjugate", comp, word, perm) | ("invert_loop", comp, k)
    | ("precompose", comp, ("arc"|"loop", j), k)."""
    kind = op[0]
    meridians = list(ps.meridians)
    loops = [list(ls) for ls in ps.loop_longitudes]
    arcs = [list(a) for a in ps.arc_longitudes]
    if kind == "conjugate":
        _, c, w, perm = op
        w = tuple(w)
        if sorted(perm) != list(range(len(loops[c]))):
            raise MoveError("conjugate: bad loop permutation")
        meridians[c] = concat(invert(w), meridians[c], w)
        new_loops = [()] * len(loops[c])
        for j, lam in enumerate(loops[c]):
            new_loops[perm[j]] = concat(invert(w), lam, w)
        loops[c] = new_loops
        arcs[c] = [concat(invert(w), a) for a in arcs[c]]
    elif kind == "invert_loop":
        _, c, k = op
        loops[c][k] = invert(loops[c][k])
    elif kind == "precompose":
        _, c, (what, j), k = op
        lam = loops[c][k]
        if what == "arc":
            arcs[c][j] = concat(lam, arcs[c][j])
        elif what == "loop":
            if j == k:
                raise MoveError("precompose: loop must be precomposed by another loop")
            loops[c][j] = concat(lam, loops[c][j])
        else:
            raise MoveError(f"precompose: bad target {what!r}")
    else:
        raise MoveError(f"unknown peripheral operation {kind!r}")
    return PeripheralSystem(ps.presentation, tuple(meridians),
                            tuple(tuple(ls) for ls in loops),
                            tuple(tuple(a) for a in arcs))


# ---------------------------------------------------------------------------
# Chen-Milnor normal form


@dataclass(frozen=True)
class NormalForm:
    graph: WGraph
    hubs: tuple[int, ...]
    arc_words: tuple[tuple[Word, ...], ...]
    loop_words: tuple[tuple[Word, ...], ...]
    trace: tuple[Move, ...]


def _emit(g: WGraph, trace: list[Move], m: Move) -> WGraph:
    trace.append(m)
    return wg.apply_move(g, m)


def _strip_letter(g: WGraph, trace: list[Move], eid: int, pos: int) -> WGraph:
    """Remove one own-component letter from a label by split + sv + reglue."""
    e = g.edge(eid)
    v1 = g.next_vid
    g = _emit(g, trace, wg.split(eid, pos))
    mid = g.next_eid - 1
    g = _emit(g, trace, wg.split(mid, 1))
    x = g.edge(mid).label[0]
    g = _emit(g, trace, wg.self_virtualize(mid, x, delete=True))
    g = _emit(g, trace, wg.contract(mid))
    g = _emit(g, trace, wg.merge(v1))
    return g


def _strip_component_letters(g: WGraph, trace: list[Move], comp: int) -> WGraph:
    while True:
        hit = None
        for e in g.component_edges(comp):
            for k, let in enumerate(e.label):
                if g.vcomp.get(abs(let)) == comp:
                    hit = (e.eid, k)
                    break
            if hit:
                break
        if hit is None:
            return g
        g = _strip_letter(g, trace, *hit)


def _rewrite_marked_occurrences(g: WGraph, trace: list[Move], m: int, wit: int) -> WGraph:
    """Replace every occurrence of the marked letter m using the empty proxy
    edge wit = (proxy, m, ε)."""
    while True:
        hit = None
        for f in g.edges:
            if f.eid == wit:
                continue
            for k, let in enumerate(f.label):
                if abs(let) == m:
                    hit = (f.eid, k, let > 0)
                    break
            if hit:
                break
        if hit is None:
            return g
        feid, k, positive = hit
        if positive:
            g = _emit(g, trace, wg.rephrased_reid3(feid, k + 1, wit, rot=0, inverted=True))
        else:
            g = _emit(g, trace, wg.rephrased_reid3(feid, k, wit, rot=0, inverted=False))


def _orient_outward(g: WGraph, trace: list[Move], v: int) -> WGraph:
    for e in g.edges_at(v):
        if not e.is_loop and e.dst == v:
            g = _emit(g, trace, wg.reverse(e.eid))
    return g


def chen_milnor_normal_form(g: WGraph, basing: Basing | None = None) -> NormalForm:
    """sv-rewrite to one unmarked hub per component; spokes carry the arc
    representatives, loops the cycle representatives, all in hub letters."""
    if basing is None:
        basing = canonical_basing(g)
    trace: list[Move] = []

    # every marked vertex gets an unmarked proxy carrying its edges, and its
    # letter is rewritten away through the proxy relation
    for m in sorted(g.marked):
        moved = []
        for e in g.edges_at(m):
            if e.src == m:
                moved.append((e.eid, "src"))
            if e.dst == m:
                moved.append((e.eid, "dst"))
        proxy_edge = g.next_eid
        g = _emit(g, trace, wg.expand(m, moved=moved, new_src_is_new=True))
        g = _rewrite_marked_occurrences(g, trace, m, proxy_edge)

    hubs = []
    for c in range(g.ncomps):
        g = _strip_component_letters(g, trace, c)
        hub = min(v for v in g.component_vertices(c) if v not in g.marked)
        hubs.append(hub)
        parents = _tree_parents(g, hub)
        depth: dict[int, int] = {hub: 0}

        def vdepth(v: int) -> int:
            if v not in depth:
                start, _ = step_ends(g, parents[v])
                depth[v] = vdepth(start) + 1
            return depth[v]

        order = sorted((v for v in g.component_vertices(c)
                        if v != hub and v not in g.marked),
                       key=lambda v: (-vdepth(v), v))
        for v in order:
            pstep = parents[v]
            peid = pstep[0]
            g = _orient_outward(g, trace, v)
            while g.edge(peid).label:
                x = g.edge(peid).label[0]
                g = _emit(g, trace, wg.gen_stabilize(v, -x))
            if g.edge(peid).src == v:
                g = _emit(g, trace, wg.reverse(peid))
            g = _emit(g, trace, wg.contract(peid))

    for c in range(g.ncomps):
        g = _strip_component_letters(g, trace, c)

    # orient spokes hub -> marked vertex
    for e in list(g.edges):
        if not e.is_loop and e.dst in hubs and e.src in g.marked:
            g = _emit(g, trace, wg.reverse(e.eid))

    hub_set = set(hubs)
    for e in g.edges:
        for let in e.label:
            if abs(let) not in hub_set:
                raise AssertionError(
                    f"normal form label on edge {e.eid} mentions non-hub {abs(let)}")

    arc_words = []
    loop_words = []
    for c in range(g.ncomps):
        spokes = {}
        loops = []
        for e in sorted(g.component_edges(c), key=lambda e: e.eid):
            if e.is_loop:
                loops.append(e.label)
            else:
                spokes[e.dst] = e.label
        arc_words.append(tuple(spokes[m] for m in g.marked_order[c]))
        loop_words.append(tuple(loops))
    return NormalForm(g, tuple(hubs), tuple(arc_words), tuple(loop_words),
                      tuple(trace))


def reduced_peripheral_data(g: WGraph, basing: Basing | None = None) -> NormalForm:
    """Normal-form representatives of the reduced peripheral system; equality
    is exposed through the Milnor table (coset-invariant coefficients)."""
    return chen_milnor_normal_form(g, basing)
