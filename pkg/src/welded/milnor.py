"""Non-repeated Milnor invariants of welded forests and sv-equivalence.

For a forest every component is a rooted tree: the canonical basing is unique
(minimal marked vertex, unique tree paths), the reduced group is the reduced
free group on one meridian per component, and the arc-longitudes' expansions
classify the forest up to sv-equivalence.  Only coefficients whose index
sequence avoids the longitude's own component are invariants; the others are
not constant on the meridian-coset and are never stored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .magnus import expand
from .peripheral import canonical_basing, chen_milnor_normal_form, preferred_word
from .wgraph import WGraph
from .words import concat, invert

TableKey = tuple[tuple[int, ...], int, int]  # (I, component i, marked index j)


class NotAForestError(ValueError):
    pass


@dataclass(frozen=True)
class MilnorTable:
    ncomps: int
    entries: dict[TableKey, int]

    def __eq__(self, other):
        if not isinstance(other, MilnorTable):
            return NotImplemented
        return self.ncomps == other.ncomps and self.entries == other.entries

    __hash__ = None

    def value(self, I, i, j) -> int:
        return self.entries.get((tuple(I), i, j), 0)

    def sorted_items(self):
        return sorted(self.entries.items(),
                      key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1], kv[0][2]))


def is_welded_forest(g: WGraph) -> bool:
    """Every component a rooted tree: Betti number 0, at least one mark."""
    return all(b == 0 and m >= 1 for m, b in g.graph_type())


def milnor_invariants(g: WGraph) -> MilnorTable:
    """Magnus coefficients of the normal-form arc representatives.

    mu(I; i, j) is the coefficient of X_{i_1}...X_{i_r} in the expansion of
    the longitude running to the j-th marked vertex of component i, for
    duplicate-free I avoiding i; zero entries are not stored.
    """
    if not is_welded_forest(g):
        raise NotAForestError(f"graph of type {g.graph_type()} is not a welded forest")
    nf = chen_milnor_normal_form(g, canonical_basing(g))
    ell = g.ncomps
    meridian_of = {hub: c + 1 for c, hub in enumerate(nf.hubs)}
    entries: dict[TableKey, int] = {}
    for c in range(ell):
        i = c + 1
        lam = nf.arc_words[c]
        base = invert(lam[0]) if lam else ()
        for j in range(2, len(lam) + 1):
            alpha = concat(base, lam[j - 1])
            alpha = preferred_word(nf.graph, nf.hubs[c], alpha)
            series = expand(alpha, meridian_of, ell)
            for key, val in series.coeffs.items():
                if key and i not in key:
                    entries[(key, i, j)] = val
    return MilnorTable(ell, entries)


class SvVerdict(enum.Enum):
    EQUIVALENT = "equivalent"
    DIFFERENT = "different"
    TYPE_MISMATCH = "type-mismatch"
    NOT_FOREST = "not-forest"

    def __bool__(self) -> bool:
        return self is SvVerdict.EQUIVALENT


def forests_sv_equivalent(a: WGraph, b: WGraph) -> SvVerdict:
    """Decide sv-equivalence of welded forests by comparing Milnor tables."""
    if not is_welded_forest(a) or not is_welded_forest(b):
        return SvVerdict.NOT_FOREST
    if a.graph_type() != b.graph_type():
        return SvVerdict.TYPE_MISMATCH
    if milnor_invariants(a) == milnor_invariants(b):
        return SvVerdict.EQUIVALENT
    return SvVerdict.DIFFERENT
