"""Compare the compiled and pure-Python completion kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""
import argparse
import random
import time

from seplab import kernels
from seplab.diophantine import EqSystem


def workload(seed: int) -> list:
    rng = random.Random(seed)
    out = []
    for rows, cols, lo, hi in [(1, 4, -3, 3), (2, 4, -3, 3), (2, 5, -3, 3), (2, 6, -2, 2), (3, 6, -2, 2), (2, 7, -4, 4), (3, 8, -3, 3)]:
        for _ in range(4):
            m = [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
            b = [rng.randint(lo, hi) for _ in range(rows)]
            out.append((f"{rows}x{cols}", EqSystem(m, b, cols)))
    return out


def homogenized(sys: EqSystem) -> tuple:
    n = sys.ncols
    matrix = [list(r) + [-b] for r, b in zip(sys.matrix, sys.rhs)]
    return matrix, n + 1, [None] * n + [1]


def time_backend(cases, backend: str, repeat: int) -> dict:
    per_shape: dict = {}
    for shape, sys in cases:
        matrix, n, bounds = homogenized(sys)
        runs = []
        for _ in range(repeat):
            t = time.perf_counter()
            kernels.completion_basis(matrix, n, bounds, backend=backend)
            runs.append(time.perf_counter() - t)
        per_shape.setdefault(shape, []).append(min(runs))
    return {k: sum(v) for k, v in per_shape.items()}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cases = workload(args.seed)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python backend is available")
    results = {b: time_backend(cases, b, args.repeat) for b in backends}
    for shape, sys in cases:
        matrix, n, bounds = homogenized(sys)
        ref = sorted(kernels.completion_basis(matrix, n, bounds, backend="python"))
        for b in backends:
            assert sorted(kernels.completion_basis(matrix, n, bounds, backend=b)) == ref
    print(f"{'shape':>6} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + ("  speedup" if len(backends) > 1 else ""))
    for shape in results["python"]:
        row = [results[b][shape] * 1e3 for b in backends]
        line = f"{shape:>6} " + " ".join(f"{x:14.2f}" for x in row)
        if len(backends) > 1:
            line += f"  {row[0] / max(row[1], 1e-9):7.1f}x"
        print(line)
    total = {b: sum(results[b].values()) for b in backends}
    print("total  " + " ".join(f"{total[b] * 1e3:14.2f}" for b in backends))
    if "cython" in total:
        print(f"overall speedup {total['python'] / total['cython']:.1f}x")


if __name__ == "__main__":
    main()
