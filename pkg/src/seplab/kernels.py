"""Kernel dispatch: compiled ``_kernels`` when available, else pure Python.

Set ``SEPLAB_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import logging
import os

from seplab import _kernels_py

log = logging.getLogger(__name__)

_compiled = None
if not os.environ.get("SEPLAB_PURE_PYTHON"):
    try:
        from seplab import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def completion_basis(matrix, n, bounds=None, backend=None):
    """Minimal nonzero solutions of matrix @ x = 0 with x <= bounds (None = unbounded)."""
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        try:
            return _compiled.completion_basis(matrix, n, bounds)
        except OverflowError:
            log.debug("int64 kernel overflow guard hit, using pure Python")
    return _kernels_py.completion_basis(matrix, n, bounds)


def available_backends() -> list:
    return ["python"] + (["cython"] if _compiled is not None else [])
