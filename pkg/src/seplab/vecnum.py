"""Integer vectors, supports, restriction and the ~_k equivalence.

Vectors are plain tuples of Python ints (arbitrary precision). Index sets are
0-based frozensets internally; external formats are 1-based and are converted
with :func:`from_one_based` / :func:`to_one_based` at the boundary.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Vec = tuple  # tuple[int, ...]


class DimensionError(ValueError):
    """Raised on mismatched dimensions or out-of-range indices."""


def nat_vec(entries: Iterable[int]) -> Vec:
    v = tuple(int(e) for e in entries)
    if any(e < 0 for e in v):
        raise ValueError(f"negative entry in natural vector {v}")
    return v


def int_vec(entries: Iterable[int]) -> Vec:
    return tuple(int(e) for e in entries)


def zero(dim: int) -> Vec:
    return (0,) * dim


def unit(dim: int, i: int) -> Vec:
    v = [0] * dim
    v[i] = 1
    return tuple(v)


def _check_dims(u: Sequence[int], v: Sequence[int]) -> None:
    if len(u) != len(v):
        raise DimensionError(f"dimension mismatch: {len(u)} vs {len(v)}")


def add(u: Sequence[int], v: Sequence[int]) -> Vec:
    _check_dims(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vec:
    _check_dims(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(c: int, v: Sequence[int]) -> Vec:
    return tuple(c * a for a in v)


def neg(v: Sequence[int]) -> Vec:
    return tuple(-a for a in v)


def vsum(vectors: Iterable[Sequence[int]], dim: int) -> Vec:
    acc = [0] * dim
    for v in vectors:
        if len(v) != dim:
            raise DimensionError(f"expected dimension {dim}, got {len(v)}")
        for i, a in enumerate(v):
            acc[i] += a
    return tuple(acc)


def lincomb(coeffs: Sequence[int], vectors: Sequence[Sequence[int]], dim: int) -> Vec:
    """Return sum_i coeffs[i] * vectors[i]."""
    if len(coeffs) != len(vectors):
        raise DimensionError("coefficient count does not match vector count")
    acc = [0] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                acc[i] += c * a
    return tuple(acc)


def leq(u: Sequence[int], v: Sequence[int]) -> bool:
    """Component-wise order."""
    return all(a <= b for a, b in zip(u, v))


def is_zero(v: Sequence[int]) -> bool:
    return not any(v)


def check_index_set(I: Iterable[int], dim: int) -> frozenset:
    I = frozenset(I)
    bad = [i for i in I if not 0 <= i < dim]
    if bad:
        raise DimensionError(f"indices {sorted(bad)} out of range for dimension {dim}")
    return I


def restrict(v: Sequence[int], I: Iterable[int]) -> Vec:
    """v|_I: keep the coordinates in I (0-based), zero the others."""
    I = check_index_set(I, len(v))
    return tuple(a if i in I else 0 for i, a in enumerate(v))


def support(v: Sequence[int]) -> frozenset:
    return frozenset(i for i, a in enumerate(v) if a != 0)


def sim_k(u: Sequence[int], v: Sequence[int], k: int) -> bool:
    """u ~_k v: per coordinate equal and <= k, or both > k and congruent mod k."""
    _check_dims(u, v)
    if k < 1:
        raise ValueError("k must be positive")
    for a, b in zip(u, v):
        if a <= k or b <= k:
            if a != b:
                return False
        elif (a - b) % k:
            return False
    return True


def sim_class(a: int, k: int) -> int:
    """Class index of a natural number under ~_k (threshold k+1, period k)."""
    if a <= k:
        return a
    return k + 1 + (a - k - 1) % k


def from_one_based(indices: Iterable[int]) -> frozenset:
    out = set()
    for i in indices:
        i = int(i)
        if i < 1:
            raise DimensionError(f"1-based index expected, got {i}")
        out.add(i - 1)
    return frozenset(out)


def to_one_based(indices: Iterable[int]) -> list:
    return sorted(i + 1 for i in indices)
