#!/usr/bin/env python3
"""Benchmark the hot kernel on both lanes: numba @njit vs pure numpy.

The kernel evaluates a sparse trigonometric series at non-uniform points,
the inner loop of the diffeomorphism push-forward.  Both lanes live in
``helicity_lab.kernels``; this script times them head to head in-process
and then runs one full push-forward per lane in subprocesses so the
``HELICITY_LAB_DISABLE_NUMBA`` switch is exercised end to end.

Usage:
    python benchmarks/benchmark_kernels.py [--quick]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from helicity_lab._accel import NUMBA_ENABLED
from helicity_lab.kernels import trig_eval_numba, trig_eval_numpy
from helicity_lab.spectral import band_kvecs, lex_positive


def make_case(n_points, k_max, seed=0):
    rng = np.random.Generator(np.random.Philox(seed))
    pts = rng.uniform(0.0, 2 * np.pi, (n_points, 3))
    kv = band_kvecs(k_max)
    pos = lex_positive(kv)
    half = rng.standard_normal((int(pos.sum()), 3)) + 1j * rng.standard_normal(
        (int(pos.sum()), 3)
    )
    coeffs = np.empty((len(kv), 3), dtype=np.complex128)
    coeffs[pos] = half
    coeffs[~pos] = np.conj(half[::-1])
    return pts, kv, coeffs


def timeit(fn, *args, repeats=5):
    fn(*args)  # warmup (JIT compile on the numba lane)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


PUSHFORWARD_SNIPPET = """
import time
import helicity_lab as hl
w = hl.random_field(4, 1, 1.0)
chain = hl.random_shear_chain(3, seed=1, max_amplitude=0.5)
hl.pushforward(chain, w, 12, 16, residual_bound=None)  # warm the kernels
t0 = time.perf_counter()
hl.pushforward(chain, w, 12, 32, residual_bound=None)
print(f"{hl.active_lane()} push-forward (k_max=4, k_out=12, n=32): "
      f"{time.perf_counter() - t0:.3f}s")
"""


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="fewer sizes and repeats")
    args = ap.parse_args()

    if not NUMBA_ENABLED:
        print("numba lane unavailable or disabled; benchmarking numpy lane only")

    sizes = [(4096, 2), (32768, 4)] if args.quick else [
        (4096, 2),
        (32768, 4),
        (110592, 4),   # 48^3 grid against a k_max=4 field: the C-4 workload
    ]
    repeats = 3 if args.quick else 5

    print(f"{'points':>8s} {'modes':>6s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for n_points, k_max in sizes:
        pts, kv, coeffs = make_case(n_points, k_max)
        t_np = timeit(trig_eval_numpy, pts, kv, coeffs, repeats=repeats)
        if NUMBA_ENABLED:
            t_nb = timeit(trig_eval_numba, pts, kv, coeffs, repeats=repeats)
            a = trig_eval_numpy(pts, kv, coeffs)
            b = trig_eval_numba(pts, kv, coeffs)
            err = float(np.max(np.abs(a - b)))
            assert err < 1e-10, f"lane disagreement {err:.3e}"
            print(
                f"{n_points:8d} {len(kv):6d} {t_np:9.4f}s {t_nb:9.4f}s "
                f"{t_np / t_nb:7.2f}x"
            )
        else:
            print(f"{n_points:8d} {len(kv):6d} {t_np:9.4f}s {'-':>10s} {'-':>8s}")

    print("\nend-to-end push-forward, one subprocess per lane:")
    for disable in ("0", "1"):
        env = dict(os.environ, HELICITY_LAB_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, "-c", PUSHFORWARD_SNIPPET],
            env=env,
            capture_output=True,
            text=True,
        )
        line = out.stdout.strip().splitlines()
        print(" ", line[-1] if line else f"(failed: {out.stderr.strip()[:200]})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
