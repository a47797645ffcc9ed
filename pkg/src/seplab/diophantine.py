"""Linear Diophantine systems over N: feasibility and minimal solutions.

Cutoff bound
------------
For a system A x = b over N^r, every component-wise minimal solution x
satisfies ``|x|_1 + 1 <= (1 + ||(A | -b)||)^rank(A | -b)``, where ``||M||`` is
the largest row sum of absolute values (Pottier's bound for the Hilbert basis
of the homogenized system ``A x - b z = 0``; minimal solutions are its
elements with ``z = 1``, Hilbert basis elements of A those with ``z = 0``).
:func:`cutoff_bound` returns this number ``B``. The ILP backend of
:func:`feasible` boxes every variable into ``[0, B]`` whenever ``B`` is small
enough to be useful, and the brute-force oracle in :mod:`seplab.oracles`
enumerates exactly the solutions with ``|x|_1 <= B``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

from seplab import kernels
from seplab._kernels_py import completion_levels
from seplab.vecnum import DimensionError

log = logging.getLogger(__name__)

# coefficients above this are not handed to the floating-point ILP backend
ILP_COEFF_LIMIT = 2**40
# box bound used by the ILP only when the cutoff is below this
ILP_BOX_LIMIT = 10**9


@dataclass(frozen=True)
class EqSystem:
    """A x = b over N^r; the projection keeps the first ``proj_dim`` coordinates."""

    matrix: tuple
    rhs: tuple
    proj_dim: int
    ncols: Optional[int] = None

    def __post_init__(self):
        matrix = tuple(tuple(int(a) for a in row) for row in self.matrix)
        rhs = tuple(int(b) for b in self.rhs)
        if len(matrix) != len(rhs):
            raise DimensionError(f"{len(matrix)} rows but {len(rhs)} right-hand sides")
        ncols = self.ncols
        if ncols is None:
            if not matrix:
                raise DimensionError("ncols is required for a system without rows")
            ncols = len(matrix[0])
        if any(len(row) != ncols for row in matrix):
            raise DimensionError("ragged matrix")
        if not 0 <= self.proj_dim <= ncols:
            raise DimensionError(f"proj_dim {self.proj_dim} outside [0, {ncols}]")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "ncols", int(ncols))

    @property
    def nrows(self) -> int:
        return len(self.matrix)

    def homogeneous(self) -> "EqSystem":
        return EqSystem(self.matrix, (0,) * self.nrows, self.proj_dim, self.ncols)

    def residual(self, x: Sequence[int]) -> tuple:
        return tuple(sum(a * xi for a, xi in zip(row, x)) - b for row, b in zip(self.matrix, self.rhs))

    def solves(self, x: Sequence[int]) -> bool:
        return len(x) == self.ncols and all(xi >= 0 for xi in x) and not any(self.residual(x))

    def project(self, x: Sequence[int]) -> tuple:
        return tuple(x[: self.proj_dim])

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "rhs": list(self.rhs),
                "proj_dim": self.proj_dim, "ncols": self.ncols}

    @classmethod
    def from_json(cls, data: dict) -> "EqSystem":
        return cls(data["matrix"], data["rhs"], int(data["proj_dim"]), data.get("ncols"))


@dataclass(frozen=True)
class SupportConstraint:
    """0-based index sets of coordinates forced to 0 or to >= 1."""

    must_be_zero: frozenset = field(default_factory=frozenset)
    must_be_positive: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        z, p = frozenset(self.must_be_zero), frozenset(self.must_be_positive)
        if z & p:
            raise ValueError(f"indices {sorted(z & p)} both zero and positive")
        object.__setattr__(self, "must_be_zero", z)
        object.__setattr__(self, "must_be_positive", p)


NO_CONSTRAINT = SupportConstraint()


def rank(matrix: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(a) for a in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def cutoff_bound(sys: EqSystem) -> int:
    """The published cutoff B (see module docstring)."""
    hom = [list(row) + [-b] for row, b in zip(sys.matrix, sys.rhs)]
    hom = [row for row in hom if any(row)]
    if not hom:
        return 1
    norm = max(sum(abs(a) for a in row) for row in hom)
    return (1 + norm) ** rank(hom)


def _cheap_box(matrix, rhs) -> Optional[int]:
    """Cutoff with the row count in place of the rank, or None when it is useless."""
    rows = [list(r) + [-b] for r, b in zip(matrix, rhs) if any(r) or b]
    if not rows:
        return 1
    norm = max(sum(abs(a) for a in row) for row in rows)
    if len(rows) * np.log(1 + norm) > np.log(ILP_BOX_LIMIT):
        return None
    return (1 + norm) ** len(rows)


def _solve_ilp(matrix, rhs, n) -> tuple:
    """Returns (status, x): status 'sat', 'unsat' or 'unknown'."""
    box = _cheap_box(matrix, rhs)
    A = csr_matrix(np.array(matrix, dtype=float))
    b = np.array(rhs, dtype=float)
    res = milp(
        c=np.ones(n),
        constraints=[LinearConstraint(A, b, b)],
        integrality=np.ones(n),
        bounds=Bounds(0, np.inf if box is None else box),
    )
    if res.status == 2:
        return "unsat", None
    if res.status != 0 or res.x is None:
        return "unknown", None
    x = tuple(int(v) for v in np.round(res.x))
    if any(v < 0 for v in x):
        return "unknown", None
    for row, bi in zip(matrix, rhs):
        if sum(a * xi for a, xi in zip(row, x)) != bi:
            return "unknown", None
    return "sat", x


def _solve_exact(matrix, rhs, n) -> Optional[tuple]:
    """Smallest-norm solution via completion on the homogenized system."""
    hom = [list(row) + [-b] for row, b in zip(matrix, rhs)]
    bounds = [None] * n + [1]
    for level in completion_levels(hom, n + 1, bounds):
        sols = sorted(x for x in level if x[n] == 1)
        if sols:
            return tuple(sols[0][:n])
    return None


def solve_nat(matrix: Sequence[Sequence[int]], rhs: Sequence[int], n: int) -> Optional[tuple]:
    """Some x in N^n with matrix @ x = rhs, or None."""
    rows, bs = [], []
    for row, b in zip(matrix, rhs):
        if any(row):
            rows.append(tuple(row))
            bs.append(b)
        elif b != 0:
            return None
    if not rows:
        return (0,) * n
    if n == 0:
        return None
    big = max(max(abs(a) for a in r) for r in rows)
    big = max(big, max(abs(b) for b in bs))
    if big <= ILP_COEFF_LIMIT:
        status, x = _solve_ilp(rows, bs, n)
        if status == "sat":
            return x
        if status == "unsat":
            return None
        log.warning("ILP backend inconclusive on %dx%d system, using exact search", len(rows), n)
    return _solve_exact(rows, bs, n)


def feasible(sys: EqSystem, sc: SupportConstraint = NO_CONSTRAINT) -> Optional[tuple]:
    """Some x in N^r solving ``sys`` under the support constraint, or None.

    Zero-forced columns are dropped, positive-forced ones substituted by
    1 + x'. The ILP witness minimizes |x|_1 and is replayed exactly.
    """
    r = sys.ncols
    for i in sc.must_be_zero | sc.must_be_positive:
        if not 0 <= i < r:
            raise DimensionError(f"support index {i} out of range for {r} columns")
    keep = [j for j in range(r) if j not in sc.must_be_zero]
    rhs = list(sys.rhs)
    for j in sc.must_be_positive:
        for i, row in enumerate(sys.matrix):
            rhs[i] -= row[j]
    sub = [[row[j] for j in keep] for row in sys.matrix]
    y = solve_nat(sub, rhs, len(keep))
    if y is None:
        return None
    x = [0] * r
    for yj, j in zip(y, keep):
        x[j] = yj + (1 if j in sc.must_be_positive else 0)
    x = tuple(x)
    assert sys.solves(x), "witness replay failed"
    return x


def minimal_solutions(sys: EqSystem, backend: Optional[str] = None) -> tuple:
    """(inhom, hilbert): minimal solutions of A x = b and Hilbert basis of A x = 0.

    Both are tuples of vectors in lexicographic order.
    """
    r = sys.ncols
    hom = [list(row) + [-b] for row, b in zip(sys.matrix, sys.rhs) if any(row) or b]
    bounds = [None] * r + [1]
    sols = kernels.completion_basis(hom, r + 1, bounds, backend=backend)
    inhom = sorted(tuple(x[:r]) for x in sols if x[r] == 1)
    hilbert = sorted(tuple(x[:r]) for x in sols if x[r] == 0)
    return tuple(inhom), tuple(hilbert)


def system_member(sys: EqSystem, point: Sequence[int]) -> Optional[tuple]:
    """A completion x of ``point`` (pi(x) = point) solving ``sys``, or None."""
    m = sys.proj_dim
    if len(point) != m:
        raise DimensionError(f"point of dimension {len(point)} for projection dimension {m}")
    if any(p < 0 for p in point):
        return None
    rhs = [b - sum(row[i] * point[i] for i in range(m)) for row, b in zip(sys.matrix, sys.rhs)]
    rest = [list(row[m:]) for row in sys.matrix]
    y = solve_nat(rest, rhs, sys.ncols - m)
    if y is None:
        return None
    return tuple(point) + tuple(y)


class SystemBuilder:
    """Assemble a system row by row over named blocks of variables."""

    def __init__(self):
        self.ncols = 0
        self.rows: list = []
        self.rhs: list = []

    def block(self, size: int) -> range:
        start = self.ncols
        self.ncols += size
        return range(start, start + size)

    def add_row(self, coeffs: dict, rhs: int = 0) -> None:
        self.rows.append(dict(coeffs))
        self.rhs.append(rhs)

    def system(self, proj_dim: int = 0) -> EqSystem:
        matrix = []
        for coeffs in self.rows:
            row = [0] * self.ncols
            for j, a in coeffs.items():
                row[j] += a
            matrix.append(row)
        return EqSystem(matrix, self.rhs, proj_dim, self.ncols)
