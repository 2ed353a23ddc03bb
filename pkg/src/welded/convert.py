"""Conversions between Gauss diagrams and w-graphs.

psi sends a diagram to the graph whose vertices are the arrow tails, with one
edge per piece of strand between consecutive tails, decorated by the head
word of that piece (each head read as the tail vertex of its arrow, with the
arrow's sign); empty edges whose removable endpoint is unmarked and unused
are then contracted, in edge-id order.

xi linearizes a tree-shaped graph by contouring a planar embedding — every
vertex keeps its contour point closest to the final vertex — and then replaces
each letter of every label by an arrow.  The linearization is computed twice:
by the contour formula and by replaying an expansion/push/contraction move
trace; the two must agree, and the trace is returned as the equivalence
certificate.
"""

from __future__ import annotations

import warnings

from . import wgraph as wg
from .gauss import LINK, STRINGLINK, GaussDiagram, Token
from .wgraph import Edge, Move, MoveError, WGraph
from .words import Word, concat, invert, reduce

PlanarOrdering = dict[int, tuple[int, ...]]


# ---------------------------------------------------------------------------
# psi: diagrams to graphs


def _contract_unused_empty_edges(g: WGraph) -> WGraph:
    while True:
        done = True
        for e in sorted(g.edges, key=lambda e: e.eid):
            if e.label != () and not e.is_loop:
                continue
            if e.label != () or e.is_loop:
                continue
            if e.dst not in g.marked and g.vertex_in_labels(e.dst) is None:
                g = wg.apply_move(g, wg.contract(e.eid))
            elif e.src not in g.marked and g.vertex_in_labels(e.src) is None:
                g = wg.apply_move(g, wg.reverse(e.eid))
                g = wg.apply_move(g, wg.contract(e.eid))
            else:
                continue
            done = False
            break
        if done:
            return g


def contract_empty_edges(g: WGraph) -> WGraph:
    """Contract every non-loop empty edge with an unmarked endpoint."""
    while True:
        done = True
        for e in sorted(g.edges, key=lambda e: e.eid):
            if e.label != () or e.is_loop:
                continue
            if e.dst not in g.marked:
                g = wg.apply_move(g, wg.contract(e.eid))
            elif e.src not in g.marked:
                g = wg.apply_move(g, wg.reverse(e.eid))
                g = wg.apply_move(g, wg.contract(e.eid))
            else:
                continue
            done = False
            break
        if done:
            return g


def _tail_vertex_ids(d: GaussDiagram) -> dict[int, int]:
    vid = 1
    out: dict[int, int] = {}
    for comp in d.components:
        if d.kind == STRINGLINK:
            vid += 1  # initial marked vertex
        for what, k in comp:
            if what == "t":
                out[k] = vid
                vid += 1
        if d.kind == STRINGLINK:
            vid += 1  # final marked vertex
    return out


def psi_stringlink(d: GaussDiagram) -> WGraph:
    """Linear w-graph of a string-link diagram: two marked endpoints per
    component, one vertex per tail, head words as labels."""
    if d.kind != STRINGLINK:
        raise ValueError("psi_stringlink expects a string-link diagram")
    tail_vid = _tail_vertex_ids(d)
    vertices = []
    edges = []
    vid = 1
    for ci, comp in enumerate(d.components):
        m0 = vid
        vid += 1
        vertices.append((m0, ci, True))
        cur = m0
        label: list[int] = []
        for what, k in comp:
            if what == "h":
                letter = tail_vid[k] * d.signs[k]
                label.append(letter)
            else:
                v = tail_vid[k]
                assert v == vid
                vid += 1
                vertices.append((v, ci, False))
                edges.append((cur, v, reduce(label)))
                cur, label = v, []
        m1 = vid
        vid += 1
        vertices.append((m1, ci, True))
        edges.append((cur, m1, reduce(label)))
    g = WGraph.build(vertices, edges)
    return _contract_unused_empty_edges(g)


def psi_link(d: GaussDiagram) -> WGraph:
    """Cyclic w-graph of a link diagram; a tail-less component degenerates to
    one fresh vertex carrying a loop (flagged when the loop is decorated)."""
    if d.kind != LINK:
        raise ValueError("psi_link expects a link diagram")
    tail_vid = _tail_vertex_ids(d)
    vertices = []
    edges = []
    vid = 1 + max(tail_vid.values(), default=0)
    for ci, comp in enumerate(d.components):
        tails = [i for i, (what, _) in enumerate(comp) if what == "t"]
        if not tails:
            word = reduce([tail_vid[k] * d.signs[k] for _, k in comp])
            v0 = vid
            vid += 1
            vertices.append((v0, ci, False))
            edges.append((v0, v0, word))
            if word:
                warnings.warn(f"component {ci} has heads but no tail; "
                              "basepoint of its loop is arbitrary")
            continue
        n = len(comp)
        for idx, start in enumerate(tails):
            vertices.append((tail_vid[comp[start][1]], ci, False))
            stop = tails[(idx + 1) % len(tails)]
            label = []
            i = (start + 1) % n
            while i != stop:
                what, k = comp[i]
                if what == "h":
                    label.append(tail_vid[k] * d.signs[k])
                i = (i + 1) % n
            edges.append((tail_vid[comp[start][1]], tail_vid[comp[stop][1]],
                          reduce(label)))
    g = WGraph.build(vertices, edges)
    return _contract_unused_empty_edges(g)


def psi(d: GaussDiagram) -> WGraph:
    return psi_stringlink(d) if d.kind == STRINGLINK else psi_link(d)


# ---------------------------------------------------------------------------
# linearization of tree components


def _component_tree(g: WGraph, c: int, root: int) -> dict[int, Edge]:
    """Parent edge per vertex of a simply connected component, rooted at root."""
    adj: dict[int, list[Edge]] = {}
    for e in g.component_edges(c):
        if e.is_loop:
            raise MoveError(f"component {c} is not simply connected (loop {e.eid})")
        adj.setdefault(e.src, []).append(e)
        adj.setdefault(e.dst, []).append(e)
    parent: dict[int, Edge] = {}
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for e in sorted(adj.get(v, []), key=lambda e: e.eid):
            u = e.dst if e.src == v else e.src
            if u not in seen:
                seen.add(u)
                parent[u] = e
                stack.append(u)
    if len(seen) != len(g.component_vertices(c)):
        raise MoveError(f"component {c} is not connected")
    return parent


def _other_end(e: Edge, v: int) -> int:
    return e.dst if e.src == v else e.src


def default_planar_ordering(g: WGraph) -> PlanarOrdering:
    """Incident edges by id, with the out edge last and the in edge
    penultimate (per component with two ordered marked vertices)."""
    ordering: PlanarOrdering = {}
    for c in range(g.ncomps):
        if len(g.marked_order[c]) != 2:
            continue
        m0, m1 = g.marked_order[c]
        to_final = _component_tree(g, c, m1)
        to_initial = _component_tree(g, c, m0)
        for v in g.component_vertices(c):
            inc = sorted({e.eid for e in g.edges_at(v)})
            out_e = to_final[v].eid if v != m1 else None
            in_e = to_initial[v].eid if v != m0 else None
            rest = [x for x in inc if x not in (out_e, in_e)]
            tail = []
            for x in (in_e, out_e):
                if x is not None and x not in tail:
                    tail.append(x)
            ordering[v] = tuple(rest + tail)
    return ordering


def _children(g: WGraph, parent: dict[int, Edge], ordering: PlanarOrdering,
              v: int) -> list[Edge]:
    par = parent.get(v)
    order = ordering[v]
    by_id = {e.eid: e for e in g.edges_at(v)}
    out = []
    for eid in order:
        if par is not None and eid == par.eid:
            continue
        out.append(by_id[eid])
    return out


def _contour_component(g: WGraph, c: int, ordering: PlanarOrdering):
    """Walk from the initial to the final marked vertex around the planar tree;
    returns the kept vertex order and the step runs between kept points."""
    m0, m1 = g.marked_order[c]
    parent = _component_tree(g, c, m1)
    tour: list[tuple[Edge, bool]] = []  # (edge, True = away from root)

    def visit(v):
        for e in _children(g, parent, ordering, v):
            w = _other_end(e, v)
            tour.append((e, True))
            visit(w)
            tour.append((e, False))

    visit(m1)
    # vertex sequence along the closed tour
    vs = [m1]
    for e, down in tour:
        vs.append(_other_end(e, vs[-1]))
    first_m0 = vs.index(m0)
    # reverse the prefix, flipping step directions: a walk m0 -> m1
    steps = [(e, not down) for e, down in reversed(tour[:first_m0])]
    walk_vs = [m0]
    for e, _ in steps:
        walk_vs.append(_other_end(e, walk_vs[-1]))
    assert walk_vs[-1] == m1
    last = {v: i for i, v in enumerate(walk_vs)}
    kept = sorted(last, key=lambda v: last[v])
    assert kept[0] == m0 and kept[-1] == m1
    runs = []
    for a, b in zip(kept, kept[1:]):
        seg: Word = ()
        pos = last[a]
        for e, _ in steps[last[a]:last[b]]:
            frm = walk_vs[pos]
            seg = concat(seg, e.label if e.src == frm else invert(e.label))
            pos += 1
        runs.append(seg)
    return kept, runs


def _isolate_marked(g: WGraph, trace: list[Move]) -> WGraph:
    for v in sorted(g.marked):
        if g.degree(v) <= 1:
            continue
        moved = []
        for e in g.edges_at(v):
            if e.src == v:
                moved.append((e.eid, "src"))
            if e.dst == v:
                moved.append((e.eid, "dst"))
        m = wg.expand(v, moved=moved, new_src_is_new=True)
        trace.append(m)
        g = wg.apply_move(g, m)
    return g


def linearize(g: WGraph, ordering: PlanarOrdering | None = None
              ) -> tuple[WGraph, list[Move]]:
    """Turn a graph of type (2,0) into the equivalent linear graph.

    Every vertex lands at its contour point closest to the final vertex;
    edges are signed concatenations of the traversed labels.  Returns the
    linear graph together with a replayable move trace from the input.
    """
    if any(t != (2, 0) for t in g.graph_type()):
        raise MoveError(f"linearize expects type (2,0), got {g.graph_type()}")
    trace: list[Move] = []
    g0 = _isolate_marked(g, trace)
    if ordering is None:
        ordering = default_planar_ordering(g0)

    # contour formula
    vertices = []
    edges = []
    for c in range(g0.ncomps):
        kept, runs = _contour_component(g0, c, ordering)
        for v in kept:
            vertices.append((v, c, v in g0.marked))
        for (a, b), label in zip(zip(kept, kept[1:]), runs):
            edges.append((a, b, label))
    lin = WGraph.build(vertices, edges)

    # move-trace realization: orient the spine, then splice each hanging
    # subtree in front of its attachment, deepest child first
    cur = g0
    for c in range(g0.ncomps):
        m0, m1 = g0.marked_order[c]
        parent = _component_tree(g0, c, m1)

        # orient the initial spine forward and record the edge into each vertex
        spine_in: dict[int, int] = {}
        spine = {m0}
        v = m0
        while v != m1:
            e = parent[v]
            if cur.edge(e.eid).dst == v:
                mv = wg.reverse(e.eid)
                trace.append(mv)
                cur = wg.apply_move(cur, mv)
            v = _other_end(e, v)
            spine.add(v)
            spine_in[v] = e.eid

        def insert_before(h: WGraph, eid: int, child: int, p: int) -> WGraph:
            if h.edge(eid).src != child:
                mv = wg.reverse(eid)
                trace.append(mv)
                h = wg.apply_move(h, mv)
            prev_eid = spine_in[p]
            z = h.next_vid
            eps_eid = h.next_eid
            mv = wg.expand(p, moved=[(prev_eid, "dst"), (eid, "dst")],
                           new_src_is_new=True)
            trace.append(mv)
            h = wg.apply_move(h, mv)
            mv = wg.push(z, h.edge(eid).label)
            trace.append(mv)
            h = wg.apply_move(h, mv)
            mv = wg.contract(eid)
            trace.append(mv)
            h = wg.apply_move(h, mv)
            spine_in[child] = prev_eid
            spine_in[p] = eps_eid
            return h

        def process(h: WGraph, p: int) -> WGraph:
            for e in reversed(_children(g0, parent, ordering, p)):
                child = _other_end(e, p)
                if child in spine:
                    h = process(h, child)
                else:
                    h = insert_before(h, e.eid, child, p)
                    h = process(h, child)
            return h

        cur = process(cur, m1)

    assert cur == lin, "contour formula and move trace disagree"
    return lin, trace


# ---------------------------------------------------------------------------
# cyclic components


def _find_cycle(g: WGraph, c: int) -> tuple[list[int], list[tuple[Edge, bool]]]:
    """Vertices and oriented steps of the unique cycle of a type-(0,1)
    component, starting at its least vertex, following the least edge."""
    edges = g.component_edges(c)
    loops = [e for e in edges if e.is_loop]
    if loops:
        e = min(loops, key=lambda e: e.eid)
        return [e.src], [(e, True)]
    deg: dict[int, int] = {}
    alive = {e.eid: e for e in edges}
    for e in edges:
        deg[e.src] = deg.get(e.src, 0) + 1
        deg[e.dst] = deg.get(e.dst, 0) + 1
    changed = True
    while changed:
        changed = False
        for eid, e in list(alive.items()):
            if deg.get(e.src, 0) == 1 or deg.get(e.dst, 0) == 1:
                del alive[eid]
                deg[e.src] -= 1
                deg[e.dst] -= 1
                changed = True
    cyc_adj: dict[int, list[Edge]] = {}
    for e in alive.values():
        cyc_adj.setdefault(e.src, []).append(e)
        cyc_adj.setdefault(e.dst, []).append(e)
    v0 = min(cyc_adj)
    first = min(cyc_adj[v0], key=lambda e: e.eid)
    verts = [v0]
    steps = [(first, first.src == v0)]
    cur = _other_end(first, v0)
    prev_eid = first.eid
    while cur != v0:
        verts.append(cur)
        nxt = next(e for e in cyc_adj[cur] if e.eid != prev_eid)
        steps.append((nxt, nxt.src == cur))
        prev_eid = nxt.eid
        cur = _other_end(nxt, cur)
    return verts, steps


def _hanging_forest(g: WGraph, c: int, cycle_verts: list[int],
                    cycle_eids: set[int]) -> dict[int, Edge]:
    """Parent edges of the trees hanging off the cycle (multi-source BFS)."""
    adj: dict[int, list[Edge]] = {}
    for e in g.component_edges(c):
        if e.eid in cycle_eids or e.is_loop:
            continue
        adj.setdefault(e.src, []).append(e)
        adj.setdefault(e.dst, []).append(e)
    parent: dict[int, Edge] = {}
    seen = set(cycle_verts)
    stack = sorted(cycle_verts, reverse=True)
    while stack:
        v = stack.pop()
        for e in sorted(adj.get(v, []), key=lambda e: e.eid):
            u = _other_end(e, v)
            if u not in seen:
                seen.add(u)
                parent[u] = e
                stack.append(u)
    return parent


def _tree_children(g: WGraph, parent: dict[int, Edge], excluded: set[int],
                   v: int) -> list[Edge]:
    par = parent.get(v)
    out = []
    for e in sorted(g.edges_at(v), key=lambda e: e.eid):
        if e.is_loop or e.eid in excluded:
            continue
        if par is not None and e.eid == par.eid:
            continue
        # only true tree edges (whose far end has this edge as parent)
        far = _other_end(e, v)
        if parent.get(far) is not None and parent[far].eid == e.eid:
            out.append(e)
    return out


def _contour_cycle(g: WGraph, c: int, forward: bool):
    """Kept vertex order around a type-(0,1) component and, per kept vertex,
    the label of the outgoing circle edge to its successor."""
    verts, steps = _find_cycle(g, c)
    if not forward:
        verts = [verts[0]] + list(reversed(verts[1:]))
        steps = [(e, not fwd) for e, fwd in reversed(steps)]
    cycle_eids = {e.eid for e, _ in steps}
    parent = _hanging_forest(g, c, verts, cycle_eids)

    walk: list[tuple[Edge, bool]] = []

    def tour(v):
        for e in reversed(_tree_children(g, parent, cycle_eids, v)):
            w = _other_end(e, v)
            walk.append((e, e.src == v))
            tour(w)
            walk.append((e, e.src == w))

    for i, (e, fwd) in enumerate(steps):
        walk.append((e, fwd))
        tour(verts[(i + 1) % len(verts)])

    vs = [verts[0]]
    for e, fwd in walk:
        vs.append(e.dst if fwd else e.src)
    last = {}
    for i, v in enumerate(vs):
        last[v] = i
    kept = sorted(last, key=lambda v: last[v])
    cuts = [last[v] for v in kept]
    runs: list[Word] = []
    prev = 0
    for t in cuts:
        seg: Word = ()
        for e, fwd in walk[prev:t]:
            seg = concat(seg, e.label if fwd else invert(e.label))
        runs.append(seg)
        prev = t
    # runs[i] leads into kept[i]; as outgoing labels, kept[i] -> kept[i+1]
    out_labels = [runs[(i + 1) % len(kept)] for i in range(len(kept))]
    return kept, out_labels


def cyclize(g: WGraph, orientations: dict[int, int] | None = None) -> WGraph:
    """Equivalent cyclic graph of a type-(0,1) graph: every vertex on its
    component's circle, labels accumulated along the chosen walk."""
    if any(t != (0, 1) for t in g.graph_type()):
        raise MoveError(f"cyclize expects type (0,1), got {g.graph_type()}")
    orientations = orientations or {}
    vertices = []
    edges = []
    for c in range(g.ncomps):
        forward = orientations.get(c, 1) >= 0
        kept, out_labels = _contour_cycle(g, c, forward)
        for v in kept:
            vertices.append((v, c, False))
        for i in range(len(kept)):
            a, b = kept[i], kept[(i + 1) % len(kept)]
            edges.append((a, b, out_labels[i]))
    return WGraph.build(vertices, edges)


# ---------------------------------------------------------------------------
# xi: graphs to diagrams


def _diagram_from_spines(kind: str, spines: list[tuple[list[int], list[Edge]]],
                         g: WGraph) -> GaussDiagram:
    """spines: per component, the vertex order and, per slot, the edge whose
    label precedes the next vertex (linear: len(edges) = len(verts) - 1;
    cyclic: len(edges) = len(verts), wrapping)."""
    arrow = 0
    heads: dict[int, list[tuple[int, int]]] = {}  # eid -> [(pos, arrow)]
    tails: dict[int, list[tuple[int, int, int]]] = {}  # vertex -> [(eid, pos, arrow)]
    signs: dict[int, int] = {}
    for _, spine_edges in spines:
        for e in spine_edges:
            for pos, let in enumerate(e.label):
                arrow += 1
                heads.setdefault(e.eid, []).append((pos, arrow))
                tails.setdefault(abs(let), []).append((e.eid, pos, arrow))
                signs[arrow] = 1 if let > 0 else -1
    comps = []
    for verts, spine_edges in spines:
        toks: list[Token] = []

        def emit_tails(v):
            for _, _, k in sorted(tails.get(v, [])):
                toks.append(("t", k))

        def emit_heads(e):
            for _, k in sorted(heads.get(e.eid, [])):
                toks.append(("h", k))

        if kind == STRINGLINK:
            for i, v in enumerate(verts):
                emit_tails(v)
                if i < len(spine_edges):
                    emit_heads(spine_edges[i])
        else:
            for i, v in enumerate(verts):
                emit_tails(v)
                emit_heads(spine_edges[i])
        comps.append(tuple(toks))
    return GaussDiagram.build(kind, comps, signs)


def xi_stringlink(g: WGraph) -> GaussDiagram:
    """One arrow per letter of every label of the linearization; tails sit in
    the block of the letter's vertex, ordered by (edge id, letter position)."""
    lin, _ = linearize(g)
    spines = []
    for c in range(lin.ncomps):
        m0, m1 = lin.marked_order[c]
        nxt = {e.src: e for e in lin.component_edges(c)}
        verts = [m0]
        spine_edges = []
        while verts[-1] != m1:
            e = nxt[verts[-1]]
            spine_edges.append(e)
            verts.append(e.dst)
        spines.append((verts, spine_edges))
    return _diagram_from_spines(STRINGLINK, spines, lin)


def xi_link(g: WGraph, orientations: dict[int, int] | None = None) -> GaussDiagram:
    cyc = cyclize(g, orientations)
    spines = []
    for c in range(cyc.ncomps):
        comp_edges = cyc.component_edges(c)
        if len(comp_edges) == 1 and comp_edges[0].is_loop:
            e = comp_edges[0]
            spines.append(([e.src], [e]))
            continue
        nxt = {e.src: e for e in comp_edges}
        start = min(cyc.component_vertices(c))
        verts = [start]
        spine_edges = [nxt[start]]
        cur = nxt[start].dst
        while cur != start:
            verts.append(cur)
            spine_edges.append(nxt[cur])
            cur = nxt[cur].dst
        spines.append((verts, spine_edges))
    return _diagram_from_spines(LINK, spines, cyc)


def xi(g: WGraph, orientations: dict[int, int] | None = None) -> GaussDiagram:
    types = set(g.graph_type())
    if types <= {(2, 0)}:
        return xi_stringlink(g)
    if types <= {(0, 1)}:
        return xi_link(g, orientations)
    raise MoveError(f"no diagram form for mixed type {g.graph_type()}")
