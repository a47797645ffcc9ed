"""Pure-Python completion kernel (fallback for the compiled ``_kernels``)."""
from __future__ import annotations

from typing import Iterator, Optional, Sequence


def completion_levels(
    matrix: Sequence[Sequence[int]],
    n: int,
    bounds: Optional[Sequence[Optional[int]]] = None,
) -> Iterator[list]:
    """Contejean-Devie completion, yielding the minimal solutions level by level.

    Level L holds the minimal nonzero x in N^n with matrix @ x = 0, x <= bounds
    and |x|_1 = L. The frontier starts at the unit vectors; a non-solution x is
    extended by e_j only when <Ax, Ae_j> < 0, and candidates dominating an
    already found solution are pruned.
    """
    s = len(matrix)
    cols = [tuple(matrix[i][j] for i in range(s)) for j in range(n)]
    if bounds is None:
        bounds = [None] * n
    basis: list = []
    # supports of basis elements, to skip hopeless domination checks
    basis_supp: list = []
    frontier: dict = {}
    for j in range(n):
        if bounds[j] is not None and bounds[j] < 1:
            continue
        x = [0] * n
        x[j] = 1
        frontier[tuple(x)] = cols[j]
    while frontier:
        found = []
        pending = []
        for x, r in frontier.items():
            if any(r):
                pending.append((x, r))
            else:
                found.append(x)
        for x in found:
            basis.append(x)
            basis_supp.append([i for i, a in enumerate(x) if a])
        if found:
            yield found
        nxt: dict = {}
        for x, r in pending:
            for j in range(n):
                bj = bounds[j]
                if bj is not None and x[j] >= bj:
                    continue
                c = cols[j]
                dot = 0
                for a, b in zip(r, c):
                    dot += a * b
                if dot >= 0:
                    continue
                y = x[:j] + (x[j] + 1,) + x[j + 1:]
                if y in nxt:
                    continue
                dominated = False
                for bv, bs in zip(basis, basis_supp):
                    for i in bs:
                        if bv[i] > y[i]:
                            break
                    else:
                        dominated = True
                        break
                if dominated:
                    continue
                nxt[y] = tuple(a + b for a, b in zip(r, c))
        frontier = nxt


def completion_basis(
    matrix: Sequence[Sequence[int]],
    n: int,
    bounds: Optional[Sequence[Optional[int]]] = None,
) -> list:
    out: list = []
    for level in completion_levels(matrix, n, bounds):
        out.extend(level)
    return out
