"""Reduced words in a free group over integer generators.

A letter is a nonzero int: ``+g`` is the generator ``g``, ``-g`` its inverse
(generator ids are positive ints issued by the owning graph).  A word is a
tuple of letters which is always freely reduced, so equality of group elements
is tuple equality.

Conventions used throughout: ``a^b = b̄·a·b`` and ``[a, b] = b̄·a·b·ā``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Word = tuple[int, ...]

EPSILON: Word = ()


class LabelingError(KeyError):
    """A word mentions a generator unknown to the supplied labeling."""


def letter(gen: int, sign: int) -> int:
    if gen <= 0 or sign not in (1, -1):
        raise ValueError(f"bad letter ({gen}, {sign})")
    return gen * sign


def gen_of(let: int) -> int:
    return abs(let)


def sign_of(let: int) -> int:
    return 1 if let > 0 else -1


def reduce(letters: Iterable[int]) -> Word:
    """Freely reduce a letter sequence.  Idempotent."""
    out: list[int] = []
    for let in letters:
        if let == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -let:
            out.pop()
        else:
            out.append(let)
    return tuple(out)


def concat(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for let in w:
            if out and out[-1] == -let:
                out.pop()
            else:
                out.append(let)
    return tuple(out)


def invert(w: Sequence[int]) -> Word:
    return tuple(-let for let in reversed(w))


def conjugate(a: Sequence[int], b: Sequence[int]) -> Word:
    """a^b = b̄ a b."""
    return concat(invert(b), a, b)


def commutator(a: Sequence[int], b: Sequence[int]) -> Word:
    """[a, b] = b̄ a b ā."""
    return concat(invert(b), a, b, invert(a))


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(invert(w), -k)
    return concat(*([w] * k))


def substitute(w: Sequence[int], gen: int, repl: Sequence[int]) -> Word:
    """Replace every occurrence of ``gen`` by ``repl`` (inverses by repl⁻¹)."""
    if gen <= 0:
        raise ValueError("generator must be positive")
    rinv = invert(repl)
    parts: list[int] = []
    for let in w:
        if let == gen:
            for x in repl:
                parts.append(x)
        elif let == -gen:
            for x in rinv:
                parts.append(x)
        else:
            parts.append(let)
    return reduce(parts)


def occurrences(w: Sequence[int], gen: int) -> list[int]:
    """Positions of ``gen`` (either sign) in ``w``."""
    return [k for k, let in enumerate(w) if abs(let) == gen]


def generators_of(w: Sequence[int]) -> set[int]:
    return {abs(let) for let in w}


def component_weight(w: Sequence[int], comp_of: Mapping[int, int], comp: int) -> int:
    """Algebraic number of letters of ``w`` lying in the given component."""
    total = 0
    for let in w:
        g = abs(let)
        if g not in comp_of:
            raise LabelingError(f"generator {g} has no component assignment")
        if comp_of[g] == comp:
            total += 1 if let > 0 else -1
    return total


def format_word(w: Sequence[int], name_of: Mapping[int, str] | None = None) -> str:
    """Shared word text syntax: `name` positive, `name'` negative, space separated."""
    toks = []
    for let in w:
        name = name_of[abs(let)] if name_of is not None else str(abs(let))
        toks.append(name if let > 0 else name + "'")
    return " ".join(toks)


def parse_word(text: str, id_of: Mapping[str, int]) -> Word:
    letters = []
    for tok in text.split():
        neg = tok.endswith("'")
        name = tok[:-1] if neg else tok
        if name not in id_of:
            raise LabelingError(f"unknown generator name {name!r}")
        g = id_of[name]
        letters.append(-g if neg else g)
    return reduce(letters)
