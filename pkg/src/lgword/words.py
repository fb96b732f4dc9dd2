"""Combinatorics on finite words: primitive roots, conjugacy, Lyndon words.

Functions accept any sequence supporting slicing and ``==`` (``str`` or atom
tuples); Lyndon order needs comparable items, so it is used on letters only.
"""

from typing import Sequence, TypeVar

W = TypeVar("W", str, tuple)


def _nonempty(w):
    if len(w) == 0:
        raise ValueError("empty word")


def primitive_root(w: W) -> tuple[W, int]:
    _nonempty(w)
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d], n // d
    raise AssertionError("unreachable")


def is_primitive(w: Sequence) -> bool:
    return primitive_root(w)[1] == 1


def rotations(w: W) -> list[W]:
    return [w[k:] + w[:k] for k in range(len(w))]


def is_lyndon(w: W) -> bool:
    _nonempty(w)
    return all(w < r for r in rotations(w)[1:])


def lyndon_rotation(w: W) -> tuple[int, W]:
    """Least offset k with root[k:] + root[:k] Lyndon, where root is the primitive root."""
    root, _ = primitive_root(w)
    rots = rotations(root)
    best = min(rots)
    k = rots.index(best)
    return k, best


def is_conjugate(u: W, v: W) -> bool:
    return len(u) == len(v) and (len(u) == 0 or v in rotations(u))
