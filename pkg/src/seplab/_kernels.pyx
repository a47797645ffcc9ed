# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Contejean-Devie completion kernel over int64.

Same contract as ``_kernels_py.completion_basis``. Raises OverflowError when
the residuals could leave the int64 range; the dispatcher then retries with
the pure-Python kernel.
"""
import numpy as np

from libc.stdint cimport int64_t

cdef int64_t LIMIT = 1 << 62


def completion_basis(matrix, Py_ssize_t n, bounds=None):
    cdef Py_ssize_t s = len(matrix)
    cdef Py_ssize_t sw = s if s > 0 else 1
    cdef Py_ssize_t i, j, a, b, m, cnt, nb, level
    cdef int64_t dot, maxabs = 0
    cdef bint dominated

    cols_np = np.zeros((n, sw), dtype=np.int64)
    for i in range(s):
        row = matrix[i]
        for j in range(n):
            val = int(row[j])
            if abs(val) >= (1 << 31):
                raise OverflowError("coefficient too large for int64 kernel")
            cols_np[j, i] = val
            if abs(val) > maxabs:
                maxabs = abs(val)
    cdef int64_t[:, ::1] cols = cols_np

    bnd_np = np.full(n if n > 0 else 1, -1, dtype=np.int64)
    if bounds is not None:
        for j in range(n):
            if bounds[j] is not None:
                bnd_np[j] = int(bounds[j])
    cdef int64_t[::1] bnd = bnd_np

    basis_np = np.zeros((16, n if n > 0 else 1), dtype=np.int64)
    cdef int64_t[:, ::1] basis = basis_np
    nb = 0
    out = []

    # initial frontier: unit vectors allowed by the bounds
    start = [j for j in range(n) if bnd[j] != 0]
    m = len(start)
    X_np = np.zeros((m if m > 0 else 1, n if n > 0 else 1), dtype=np.int64)
    R_np = np.zeros((m if m > 0 else 1, sw), dtype=np.int64)
    for a in range(m):
        X_np[a, start[a]] = 1
        R_np[a, :] = cols_np[start[a], :]
    cdef int64_t[:, ::1] X = X_np
    cdef int64_t[:, ::1] R = R_np
    cdef int64_t[:, ::1] NX
    cdef int64_t[:, ::1] NR
    cdef bint * solved

    level = 1
    while m > 0:
        # residual entries are bounded by level * maxabs
        if maxabs > 0 and (level + 1) > LIMIT // (maxabs * maxabs * sw + 1):
            raise OverflowError("completion level too deep for int64 kernel")
        solved_np = np.zeros(m, dtype=np.uint8)
        for a in range(m):
            dominated = True
            for i in range(s):
                if R[a, i] != 0:
                    dominated = False
                    break
            if dominated:
                solved_np[a] = 1
                if nb == basis.shape[0]:
                    grown = np.zeros((2 * nb, basis.shape[1]), dtype=np.int64)
                    grown[:nb, :] = basis_np[:nb, :]
                    basis_np = grown
                    basis = basis_np
                for j in range(n):
                    basis[nb, j] = X[a, j]
                nb += 1
                out.append(tuple(X_np[a, :n].tolist()))
        NX_np = np.zeros((m * n if m * n > 0 else 1, n if n > 0 else 1), dtype=np.int64)
        NR_np = np.zeros((m * n if m * n > 0 else 1, sw), dtype=np.int64)
        NX = NX_np
        NR = NR_np
        seen = set()
        cnt = 0
        for a in range(m):
            if solved_np[a]:
                continue
            for j in range(n):
                if bnd[j] >= 0 and X[a, j] >= bnd[j]:
                    continue
                dot = 0
                for i in range(s):
                    dot += R[a, i] * cols[j, i]
                if dot >= 0:
                    continue
                for i in range(n):
                    NX[cnt, i] = X[a, i]
                NX[cnt, j] += 1
                dominated = False
                for b in range(nb):
                    dominated = True
                    for i in range(n):
                        if basis[b, i] > NX[cnt, i]:
                            dominated = False
                            break
                    if dominated:
                        break
                if dominated:
                    continue
                key = NX_np[cnt, :n].tobytes()
                if key in seen:
                    continue
                seen.add(key)
                for i in range(s):
                    NR[cnt, i] = R[a, i] + cols[j, i]
                cnt += 1
        m = cnt
        X_np = NX_np
        R_np = NR_np
        X = NX
        R = NR
        level += 1
    return out
