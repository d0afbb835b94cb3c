"""Compare the compiled and pure-Python RK4 kernels.

    python benchmarks/bench_rk4.py [--steps 200000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from lambdatunnel._core import _rk4_py
from lambdatunnel.qsys import SystemParams, build_hamiltonian

try:
    from lambdatunnel._core import _rk4
except ImportError:
    _rk4 = None


def best_time(run, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = run(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args()

    h = np.ascontiguousarray(build_hamiltonian(SystemParams(0.8, -0.6, 0.3, -0.2, 0.1)))
    b0 = np.array([0.6, 0.8j, 0.0], dtype=complex)
    args = (h, b0, 0.004, opts.steps, 1000, 0.0, 0.0, 0.0, 2.0)

    t_py, out_py = best_time(_rk4_py.rk4_run, args, opts.repeat)
    print(f"python  {opts.steps:>9d} steps  {t_py:8.4f} s  {opts.steps / t_py:12.0f} steps/s")
    if _rk4 is None:
        print("cython  not built (pip install -e . --no-build-isolation)")
        return
    t_c, out_c = best_time(_rk4.rk4_run, args, opts.repeat)
    print(f"cython  {opts.steps:>9d} steps  {t_c:8.4f} s  {opts.steps / t_c:12.0f} steps/s")
    print(f"speedup {t_py / t_c:.1f}x; max sample difference {np.max(np.abs(out_py[0] - out_c[0])):.1e}")


if __name__ == "__main__":
    main()
