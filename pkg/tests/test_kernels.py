import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from seplab import _kernels_py, kernels

entries = st.integers(-3, 3)


def _matrix(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in kernels.available_backends()


def test_small_hilbert_basis():
    basis = sorted(kernels.completion_basis([[1, -2]], 2))
    assert basis == [(2, 1)]
    basis = sorted(kernels.completion_basis([[1, 1, -1]], 3))
    assert basis == [(0, 1, 1), (1, 0, 1)]


def test_bounds_respected():
    basis = kernels.completion_basis([[1, -1, 0]], 3, [5, 5, 1])
    assert (0, 0, 1) in basis
    assert all(v[2] <= 1 for v in basis)


@pytest.mark.skipif("cython" not in kernels.available_backends(), reason="extension not built")
@given(st.integers(1, 2).flatmap(lambda r: st.integers(2, 4).flatmap(lambda c: _matrix(r, c))))
def test_backends_agree(matrix):
    n = len(matrix[0])
    py = sorted(kernels.completion_basis(matrix, n, backend="python"))
    cy = sorted(kernels.completion_basis(matrix, n, backend="cython"))
    assert py == cy


@pytest.mark.skipif("cython" not in kernels.available_backends(), reason="extension not built")
def test_overflow_falls_back_to_python():
    big = 2**40
    m = [[big, -big]]
    assert sorted(kernels.completion_basis(m, 2, backend="cython")) == [(1, 1)]


def test_pure_python_env_switch():
    env = dict(os.environ, SEPLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from seplab import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_levels_are_minimal_per_level():
    levels = list(_kernels_py.completion_levels([[2, -3]], 2, None))
    flat = [v for lvl in levels for v in lvl]
    assert flat == [(3, 2)]
