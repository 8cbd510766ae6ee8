"""Compare the compiled and pure-Python Jacobi eigensolvers.

    python benchmarks/bench_jacobi.py [--sizes 2 4 8 16 32] [--repeat 20]

Prints one row per size with the median time of each backend, the speedup,
and the reconstruction error of both (LAPACK ``eigh`` timing for reference).
"""

import argparse
import statistics
import time

import numpy as np

from geofid import _jacobi_py

try:
    from geofid import _jacobi
except ImportError:  # pragma: no cover
    _jacobi = None


def _herm(n, rng):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.ascontiguousarray((G + G.conj().T) / 2)


def _time(fn, H, repeat):
    ts = []
    for _ in range(repeat):
        A = H.copy()
        t0 = time.perf_counter()
        fn(A)
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def _recon(fn, H):
    w, V, _, _ = fn(H.copy(), 100, 1e-15)
    return np.linalg.norm((V * w) @ V.conj().T - H) / np.linalg.norm(H)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 16, 32])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    py = lambda A: _jacobi_py.jacobi_eigh(A, 100, 1e-15)  # noqa: E731
    cc = (lambda A: _jacobi.jacobi_eigh(A, 100, 1e-15)) if _jacobi else None  # noqa: E731

    print(f"{'n':>4} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>8} {'lapack [ms]':>12} {'err py':>9} {'err cc':>9}")
    for n in args.sizes:
        H = _herm(n, rng)
        t_py = _time(py, H, max(3, args.repeat // 4))
        t_cc = _time(cc, H, args.repeat) if cc else float("nan")
        t_np = _time(np.linalg.eigh, H, args.repeat)
        e_py = _recon(_jacobi_py.jacobi_eigh, H)
        e_cc = _recon(_jacobi.jacobi_eigh, H) if cc else float("nan")
        print(
            f"{n:4d} {1e3 * t_py:12.3f} {1e3 * t_cc:14.4f} {t_py / t_cc:8.1f} "
            f"{1e3 * t_np:12.4f} {e_py:9.1e} {e_cc:9.1e}"
        )


if __name__ == "__main__":
    main()
