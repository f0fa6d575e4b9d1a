"""Compare the numba kernels with their numpy fallbacks.

Part 1 times each kernel from both families in one process, after a warm-up
call so JIT compilation is not counted. Part 2 runs the 720-sample boundary
trace of the 4-norm example end to end in two subprocesses, one with
SHADOWPROJ_DISABLE_NUMBA=1. The kernels are evaluated one point at a time
inside the Newton loop, so per-call overhead matters as much as throughput.

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from shadowproj import kernels
from shadowproj._accel import HAVE_NUMBA

TRACE_SNIPPET = """
import time
from shadowproj._accel import backend
from shadowproj.quartic_plane import quartic_problem
from shadowproj.shadow import boundary_trace
body, frame = quartic_problem()
boundary_trace(body, frame, 16)
t0 = time.perf_counter()
boundary_trace(body, frame, 720)
print(backend(), time.perf_counter() - t0)
"""


def cases(rng):
    x = rng.standard_normal(3)
    X = rng.standard_normal((100_000, 3))
    Q = np.diag([1.0, 4.0, 9.0])
    u, v = rng.uniform(-2, 2, (2, 100_000))
    return [
        ("pnorm_gauge  (1 point)", "pnorm_gauge", (x, 4.0)),
        ("pnorm_grad   (1 point)", "pnorm_grad", (x, 4.0)),
        ("quad_grad    (1 point)", "quad_grad", (x, Q)),
        ("pnorm_gauge_rows (1e5)", "pnorm_gauge_rows", (X, 4.0)),
        ("quad_gauge_rows  (1e5)", "quad_gauge_rows", (X, Q)),
        ("cardano_rows     (1e5)", "cardano_rows", (u, v)),
    ]


def time_call(fn, args, repeat):
    fn(*args)
    n, _ = timeit.Timer(lambda: fn(*args)).autorange()
    best = min(timeit.Timer(lambda: fn(*args)).repeat(repeat, n))
    return best / n


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<24} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for label, name, args in cases(rng):
        t_np = time_call(kernels.NUMPY_KERNELS[name], args, repeat)
        if HAVE_NUMBA:
            t_nb = time_call(kernels.NUMBA_KERNELS[name], args, repeat)
            print(f"{label:<24} {t_np * 1e6:>10.2f}us {t_nb * 1e6:>10.2f}us {t_np / t_nb:>7.1f}x")
        else:
            print(f"{label:<24} {t_np * 1e6:>10.2f}us {'n/a':>12}")


def bench_trace():
    print("\nend-to-end trace, 720 samples")
    for disable in ("0", "1"):
        env = dict(os.environ, SHADOWPROJ_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", TRACE_SNIPPET], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<6} {float(out[1]):.3f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench_kernels(args.repeat)
    bench_trace()


if __name__ == "__main__":
    main()
