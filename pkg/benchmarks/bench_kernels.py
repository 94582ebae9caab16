"""Timing comparison of the numba and numpy kernel backends.

Both implementations are imported directly, so the script is independent
of the TANGLEROOF_BACKEND selection. The numba path is warmed once before
timing to exclude JIT compilation.

Usage: python3 benchmarks/bench_kernels.py [--rows 200000] [--samples 20000]
"""
import argparse
import time

import numpy as np

from tangleroof._kernels import (
    min_average_batch_numba,
    min_average_batch_numpy,
    tau3_many_numba,
    tau3_many_numpy,
)


def _time(fn, *args, repeats=5):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_tau3(rows: int, repeats: int):
    rng = np.random.default_rng(0)
    amps = rng.normal(size=(rows, 8)) + 1j * rng.normal(size=(rows, 8))
    t_np, v_np = _time(tau3_many_numpy, amps, repeats=repeats)
    t_nb, v_nb = _time(tau3_many_numba, amps, repeats=repeats)
    err = float(np.abs(v_np - v_nb).max() / max(1.0, np.abs(v_np).max()))
    return t_np, t_nb, err


def bench_min_average(samples: int, repeats: int):
    rng = np.random.default_rng(1)
    base = rng.normal(size=(2, 8)) + 1j * rng.normal(size=(2, 8))
    base /= np.linalg.norm(base, axis=1, keepdims=True)
    base *= np.sqrt([0.4, 0.6])[:, None]
    sizes = rng.integers(2, 5, size=samples)
    gauss = rng.normal(size=(samples, 4, 2, 2))
    t_np, v_np = _time(min_average_batch_numpy, base, gauss, sizes, repeats=repeats)
    t_nb, v_nb = _time(min_average_batch_numba, base, gauss, sizes, repeats=repeats)
    return t_np, t_nb, abs(v_np - v_nb)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if tau3_many_numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    # warm the JIT outside the timed region
    tau3_many_numba(np.ones((2, 8), dtype=complex))
    min_average_batch_numba(
        np.ones((2, 8), dtype=complex),
        np.random.default_rng(2).normal(size=(4, 4, 2, 2)),
        np.array([2, 2, 3, 4], dtype=np.int64),
    )

    print(f"{'kernel':<18} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9} {'max diff':>10}")
    t_np, t_nb, err = bench_tau3(args.rows, args.repeats)
    print(f"{'tau3_many':<18} {t_np:12.6f} {t_nb:12.6f} {t_np / t_nb:8.2f}x {err:10.2e}")
    t_np, t_nb, err = bench_min_average(args.samples, args.repeats)
    print(f"{'min_average_batch':<18} {t_np:12.6f} {t_nb:12.6f} {t_np / t_nb:8.2f}x {err:10.2e}")


if __name__ == "__main__":
    main()
