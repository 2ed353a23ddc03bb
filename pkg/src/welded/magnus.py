"""Reduced Magnus expansion and its equality oracle for the reduced free group.

Series live in Z<<X_1,...,X_l>> modulo the ideal generated by monomials that
repeat a variable, so every surviving monomial is a duplicate-free sequence
over {1..l} and the whole ring has finitely many monomials.  The expansion
sends mu_i^e to 1 + e*X_i; by injectivity on the reduced free group it decides
triviality there.

Coefficients are exact.  For num_vars <= _DENSE_MAX the ring is small enough
to enumerate, and operations run on dense int64 vectors; analytic bounds keep
int64 exact, and anything that could overflow falls back to the big-int dict
path.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .words import LabelingError, Word

_DENSE_MAX = 6
# Safe int64 headroom: products checked against 2**62.
_INT64_GUARD = 1 << 62
# C(2000, 6) < 2**57, so expansions of words up to this length cannot
# overflow int64 at any intermediate step.
_DENSE_WORD_LIMIT = 2000

Monomial = tuple[int, ...]


@lru_cache(maxsize=None)
def _basis(num_vars: int):
    """Enumerated duplicate-free monomials, index map, append and split tables."""
    monomials: list[Monomial] = [()]
    frontier: list[Monomial] = [()]
    for _ in range(num_vars):
        nxt = []
        for m in frontier:
            used = set(m)
            for i in range(1, num_vars + 1):
                if i not in used:
                    nxt.append(m + (i,))
        monomials.extend(nxt)
        frontier = nxt
    monomials.sort(key=lambda m: (len(m), m))
    index = {m: k for k, m in enumerate(monomials)}
    append_src = []
    append_dst = []
    for i in range(1, num_vars + 1):
        src = []
        dst = []
        for k, m in enumerate(monomials):
            if i not in m:
                src.append(k)
                dst.append(index[m + (i,)])
        append_src.append(np.array(src, dtype=np.intp))
        append_dst.append(np.array(dst, dtype=np.intp))
    ia, ib, ic = [], [], []
    for k, m in enumerate(monomials):
        for cut in range(len(m) + 1):
            ia.append(index[m[:cut]])
            ib.append(index[m[cut:]])
            ic.append(k)
    mul_table = (
        np.array(ia, dtype=np.intp),
        np.array(ib, dtype=np.intp),
        np.array(ic, dtype=np.intp),
    )
    return monomials, index, append_src, append_dst, mul_table


class NonRepeatedSeries:
    """Exact-integer series with duplicate-free monomial keys.

    Holds a sparse dict of big ints, a dense int64 vector, or both; the two
    representations are kept consistent and equality works across them.
    """

    __slots__ = ("num_vars", "_coeffs", "_vec")

    def __init__(self, num_vars: int, coeffs: Mapping[Monomial, int] | None = None,
                 _vec=None):
        if num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        self.num_vars = num_vars
        self._vec = _vec
        if coeffs is None:
            self._coeffs = None
        else:
            clean = {}
            for key, val in coeffs.items():
                key = tuple(key)
                if len(set(key)) != len(key):
                    raise ValueError(f"repeated variable in monomial {key}")
                if any(i < 1 or i > num_vars for i in key):
                    raise ValueError(f"variable out of range in {key}")
                if val:
                    clean[key] = int(val)
            self._coeffs = clean
        if self._coeffs is None and self._vec is None:
            self._coeffs = {}

    @classmethod
    def identity(cls, num_vars: int) -> "NonRepeatedSeries":
        return cls(num_vars, {(): 1})

    @property
    def coeffs(self) -> dict[Monomial, int]:
        if self._coeffs is None:
            monomials = _basis(self.num_vars)[0]
            vec = self._vec
            self._coeffs = {monomials[k]: int(vec[k]) for k in np.nonzero(vec)[0]}
        return self._coeffs

    def coefficient(self, key: Sequence[int]) -> int:
        key = tuple(key)
        if len(set(key)) != len(key):
            raise ValueError(f"repeated index in {key}")
        if self._vec is not None:
            index = _basis(self.num_vars)[1]
            k = index.get(key)
            if k is None:
                raise ValueError(f"variable out of range in {key}")
            return int(self._vec[k])
        return self.coeffs.get(key, 0)

    def is_identity(self) -> bool:
        if self._vec is not None:
            vec = self._vec
            if vec[0] != 1:
                return False
            return not np.any(vec[1:])
        return self.coeffs == {(): 1}

    def max_abs(self) -> int:
        if self._vec is not None:
            return int(np.abs(self._vec).max()) if len(self._vec) else 0
        return max((abs(v) for v in self.coeffs.values()), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NonRepeatedSeries):
            return NotImplemented
        if self.num_vars != other.num_vars:
            return False
        if self._vec is not None and other._vec is not None:
            return bool(np.array_equal(self._vec, other._vec))
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.coeffs.items())))

    def __repr__(self):
        terms = []
        for key in sorted(self.coeffs, key=lambda m: (len(m), m)):
            val = self.coeffs[key]
            mono = "".join(f"X{i}" for i in key) or "1"
            terms.append(f"{val:+d}*{mono}")
        return "NonRepeatedSeries(" + (" ".join(terms) or "0") + ")"


def _to_vec(s: NonRepeatedSeries):
    if s._vec is not None:
        return s._vec
    monomials, index = _basis(s.num_vars)[:2]
    vec = np.zeros(len(monomials), dtype=np.int64)
    for key, val in s.coeffs.items():
        vec[index[key]] = val
    return vec


def expand(w: Word, meridian_of: Mapping[int, int], num_vars: int) -> NonRepeatedSeries:
    """Reduced Magnus expansion: multiply the per-letter binomials 1 + e*X_i."""
    vars_of = []
    for let in w:
        g = abs(let)
        if g not in meridian_of:
            raise LabelingError(f"generator {g} has no meridian assignment")
        i = meridian_of[g]
        if not 1 <= i <= num_vars:
            raise ValueError(f"variable {i} out of range 1..{num_vars}")
        vars_of.append((i, 1 if let > 0 else -1))
    if num_vars <= _DENSE_MAX and len(w) <= _DENSE_WORD_LIMIT:
        monomials, _, append_src, append_dst, _ = _basis(num_vars)
        vec = np.zeros(len(monomials), dtype=np.int64)
        vec[0] = 1
        for i, eps in vars_of:
            src = append_src[i - 1]
            dst = append_dst[i - 1]
            if eps == 1:
                vec[dst] += vec[src]
            else:
                vec[dst] -= vec[src]
        return NonRepeatedSeries(num_vars, _vec=vec)
    coeffs: dict[Monomial, int] = {(): 1}
    for i, eps in vars_of:
        out = dict(coeffs)
        for key, val in coeffs.items():
            if i not in key:
                k2 = key + (i,)
                v2 = out.get(k2, 0) + eps * val
                if v2:
                    out[k2] = v2
                elif k2 in out:
                    del out[k2]
        coeffs = out
    return NonRepeatedSeries(num_vars, coeffs)


def mul(s: NonRepeatedSeries, t: NonRepeatedSeries) -> NonRepeatedSeries:
    """Product with all repeated-variable monomials dropped."""
    if s.num_vars != t.num_vars:
        raise ValueError(f"num_vars mismatch: {s.num_vars} != {t.num_vars}")
    nv = s.num_vars
    if nv <= _DENSE_MAX:
        guard = (nv + 1) * max(s.max_abs(), 1) * max(t.max_abs(), 1)
        if guard < _INT64_GUARD:
            ia, ib, ic = _basis(nv)[4]
            va, vb = _to_vec(s), _to_vec(t)
            out = np.zeros(len(va), dtype=np.int64)
            np.add.at(out, ic, va[ia] * vb[ib])
            return NonRepeatedSeries(nv, _vec=out)
    out_coeffs: dict[Monomial, int] = {}
    items_t = list(t.coeffs.items())
    for ka, va in s.coeffs.items():
        seen = set(ka)
        for kb, vb in items_t:
            if seen.isdisjoint(kb):
                kc = ka + kb
                vc = out_coeffs.get(kc, 0) + va * vb
                if vc:
                    out_coeffs[kc] = vc
                elif kc in out_coeffs:
                    del out_coeffs[kc]
    return NonRepeatedSeries(nv, out_coeffs)


def coefficient(s: NonRepeatedSeries, key: Sequence[int]) -> int:
    return s.coefficient(key)


def is_trivial_in_RF(w: Word, meridian_of: Mapping[int, int], num_vars: int) -> bool:
    """True iff the expansion is 1; decides triviality in the reduced free group."""
    return expand(w, meridian_of, num_vars).is_identity()
