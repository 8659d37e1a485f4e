"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Each kernel is run once per backend before timing so JIT compilation is
excluded; the best of ``--repeat`` runs is reported. Results of the two
backends are also compared.
"""

import argparse
import math
import time

import numpy as np

from maxvol import _backend, kernels

CASES = [
    ("subset_log2_volumes 12x16 k=5", lambda A: kernels.subset_log2_volumes(A, 5, 1e-12), (12, 16)),
    ("subset_log2_volumes 20x22 k=6", lambda A: kernels.subset_log2_volumes(A, 6, 1e-12), (20, 22)),
    ("swap_log2_volumes 200x400 k=20", lambda A: kernels.swap_log2_volumes(A, list(range(0, 400, 20)), 1e-12), (200, 400)),
    ("jacobi_singular_values 120x80", lambda A: kernels.jacobi_singular_values(A)[0], (120, 80)),
]


def best_time(fn, A, repeat):
    fn(A)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(A)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _backend.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':36s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, fn, shape in CASES:
        A = rng.standard_normal(shape)
        row = {}
        for backend in _backend.BACKENDS:
            if backend == "numba" and not _backend.HAVE_NUMBA:
                continue
            with _backend.use_backend(backend):
                row[backend] = best_time(fn, A, args.repeat)
        tn = row.get("numba", (math.nan, None))[0]
        tp, ref = row["numpy"]
        diff = math.nan
        if "numba" in row:
            a, b = np.asarray(row["numba"][1]), np.asarray(ref)
            finite = np.isfinite(a) & np.isfinite(b)
            diff = float(np.abs(a[finite] - b[finite]).max(initial=0.0))
        print(f"{name:36s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
