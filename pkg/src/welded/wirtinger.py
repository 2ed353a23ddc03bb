"""Wirtinger presentations and the dictionary with unmarked w-graphs.

A relation is stored as a triple (j, i, w) encoding x_j⁻¹ · x_i^w, i.e.
"x_j equals x_i conjugated by w".  Under the dictionary an edge (a, b, w)
becomes the relation (b, a, w), and the four presentation operations
correspond to contraction, orientation reversal, generalized stabilization
and Reidemeister 3 on the graph side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .wgraph import MoveError, WGraph
from .words import Word, concat, invert, reduce, substitute

Relation = tuple[int, int, Word]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[int, ...]
    relations: tuple[Relation, ...]

    def validate(self) -> None:
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generator")
        for j, i, w in self.relations:
            if j not in gens or i not in gens:
                raise ValueError(f"relation ({j},{i},..) uses unknown generators")
            for let in w:
                if abs(let) not in gens:
                    raise ValueError(f"relation word mentions non-generator {abs(let)}")


@dataclass(frozen=True)
class PresentationOp:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None


def eliminate(relation: int) -> PresentationOp:
    return PresentationOp("eliminate", {"relation": relation})


def flip(relation: int) -> PresentationOp:
    return PresentationOp("flip", {"relation": relation})


def conjugate_generator(gen: int, alpha: int) -> PresentationOp:
    return PresentationOp("conjugate", {"gen": gen, "alpha": alpha})


def r3_rewrite(relation: int, witness: int, rev: bool = False) -> PresentationOp:
    return PresentationOp("r3", {"relation": relation, "witness": witness,
                                 "reverse": rev})


def from_wgraph(g: WGraph) -> Presentation:
    """Generators are the vertices (marks forgotten), one relation per edge."""
    gens = tuple(sorted(g.vcomp, key=lambda v: (g.vcomp[v], v)))
    rels = tuple((e.dst, e.src, e.label) for e in g.edges)
    return Presentation(gens, rels)


def to_wgraph(p: Presentation, comp_of: Mapping[int, int] | None = None) -> WGraph:
    """Inverse dictionary; components derived from relations unless given."""
    p.validate()
    if comp_of is None:
        parent = {v: v for v in p.generators}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for j, i, _ in p.relations:
            parent[find(j)] = find(i)
        roots: dict[int, int] = {}
        comp_of = {}
        for v in p.generators:
            r = find(v)
            comp_of[v] = roots.setdefault(r, len(roots))
    vertices = [(v, comp_of[v], False) for v in p.generators]
    edges = [(i, j, w) for j, i, w in p.relations]
    return WGraph.build(vertices, edges)


def _relation(p: Presentation, k: int) -> Relation:
    if not 0 <= k < len(p.relations):
        raise MoveError(f"no relation with index {k}")
    return p.relations[k]


def apply_presentation_op(p: Presentation, op: PresentationOp) -> Presentation:
    if op.kind == "eliminate":
        j, i, w = _relation(p, op.relation)
        if w != ():
            raise MoveError(f"eliminate: relation {op.relation} has a nonempty conjugator")
        if j == i:
            raise MoveError("eliminate: relation identifies a generator with itself")
        gens = tuple(x for x in p.generators if x != j)
        rels = []
        for k, (jj, ii, ww) in enumerate(p.relations):
            if k == op.relation:
                continue
            rels.append((i if jj == j else jj, i if ii == j else ii,
                         substitute(ww, j, (i,))))
        return Presentation(gens, tuple(rels))

    if op.kind == "flip":
        j, i, w = _relation(p, op.relation)
        rels = list(p.relations)
        rels[op.relation] = (i, j, invert(w))
        return Presentation(p.generators, tuple(rels))

    if op.kind == "conjugate":
        t, alpha = op.gen, op.alpha
        if t not in p.generators:
            raise MoveError(f"conjugate: unknown generator {t}")
        if abs(alpha) not in p.generators:
            raise MoveError(f"conjugate: unknown conjugator letter {abs(alpha)}")
        if abs(alpha) == t:
            raise MoveError("conjugate: conjugator letter must differ from the generator")
        conj = (-alpha, t, alpha)
        rels = []
        for j, i, w in p.relations:
            u = substitute(w, t, conj)
            if i == t:
                u = concat((alpha,), u)
            if j == t:
                u = concat(u, (-alpha,))
            rels.append((j, i, u))
        return Presentation(p.generators, tuple(rels))

    if op.kind == "r3":
        j2, i1, w = _relation(p, op.witness)
        if op.relation == op.witness:
            raise MoveError("r3: relation and witness must differ")
        j4, i3, u = _relation(p, op.relation)
        if op.params["reverse"]:
            pattern, result = concat(w, (j2,)), concat((i1,), w)
        else:
            pattern, result = concat((i1,), w), concat(w, (j2,))
        if u != pattern:
            raise MoveError(f"r3: relation {op.relation} does not match the witness pattern")
        rels = list(p.relations)
        rels[op.relation] = (j4, i3, result)
        return Presentation(p.generators, tuple(rels))

    raise MoveError(f"unknown presentation op {op.kind!r}")


def format_presentation(p: Presentation, name_of: Mapping[int, str] | None = None) -> str:
    from .words import format_word

    def name(v):
        return name_of[v] if name_of is not None else str(v)

    lines = ["gen " + " ".join(name(v) for v in p.generators)]
    for j, i, w in p.relations:
        rhs = name(i) + (" ^ " + format_word(w, name_of) if w else "")
        lines.append(f"rel {name(j)} = {rhs}")
    return "\n".join(lines) + "\n"
