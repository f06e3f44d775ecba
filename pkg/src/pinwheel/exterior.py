"""Words in anticommuting degree-one generators.

A word is a tuple of sortable letters.  Normalizing a word sorts it and
records the sign of the sorting permutation; a repeated letter makes the
word vanish.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .linalg import SparseVector


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(perm))`` given as a list of images."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_word(word: Sequence) -> tuple[int, tuple]:
    """Return ``(sign, sorted word)``; sign is 0 when a letter repeats."""
    order = sorted(range(len(word)), key=word.__getitem__)
    out = tuple(word[i] for i in order)
    for a, b in zip(out, out[1:]):
        if a == b:
            return 0, out
    return permutation_sign(order), out


def wedge(x: Mapping[tuple, object], y: Mapping[tuple, object]) -> SparseVector:
    """Product of two linear combinations of sorted words."""
    out = SparseVector()
    for u, a in x.items():
        for v, b in y.items():
            s, w = sort_word(u + v)
            if s:
                out.add(w, s * a * b)
    return out


def normalize(x: Mapping[tuple, object]) -> SparseVector:
    """Sort every word of a combination, collecting signs."""
    out = SparseVector()
    for w, c in x.items():
        s, sw = sort_word(w)
        if s:
            out.add(sw, s * c)
    return out


def shuffle_sign(sides: Sequence[int]) -> int:
    """Sign of the permutation that moves all letters labelled 0 in front of
    all letters labelled 1, preserving relative order within each side."""
    ones = 0
    inversions = 0
    for s in sides:
        if s:
            ones += 1
        else:
            inversions += ones
    return -1 if inversions % 2 else 1
