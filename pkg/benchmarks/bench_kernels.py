"""Benchmark the compiled integration kernels against the pure-Python
fallback on a long renormalized trajectory and a section-return solve.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from sphereflow.families import hopf_example_field
from sphereflow.kernels import _py_kernels
from sphereflow.numerics import field_arrays

try:
    from sphereflow.kernels import _kernels
except ImportError:
    _kernels = None


def setup():
    X = hopf_example_field(9 / 5)
    exps, coeffs = field_arrays(X.components(), 3)
    x0 = np.array([0.3, 0.4, -np.sqrt(1 - 0.25)])
    return exps, coeffs, x0


def bench(mod, exps, coeffs, x0, repeats=3):
    best_traj = best_sec = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        status, ts, ys, nsteps, nrej = mod.rk45_integrate(
            exps, coeffs, x0, 0.0, 50.0, 1e-10, 1e-12, True)
        best_traj = min(best_traj, time.perf_counter() - t0)
        anchor = np.array([0.3, 0.4, -np.sqrt(1 - 0.25)])
        direction = np.array([0.4, -0.3, 0.0])
        t0 = time.perf_counter()
        mod.rk45_to_section(exps, coeffs, x0, anchor, direction,
                            200.0, 1e-10, 1e-12)
        best_sec = min(best_sec, time.perf_counter() - t0)
    return best_traj, best_sec, nsteps


def main():
    exps, coeffs, x0 = setup()
    py_traj, py_sec, nsteps = bench(_py_kernels, exps, coeffs, x0)
    print(f"pure python : trajectory {py_traj*1e3:9.2f} ms   "
          f"section {py_sec*1e3:9.2f} ms   ({nsteps} steps)")
    if _kernels is None:
        print("compiled    : extension not built (pure-Python fallback only)")
        return
    c_traj, c_sec, _ = bench(_kernels, exps, coeffs, x0)
    print(f"compiled    : trajectory {c_traj*1e3:9.2f} ms   "
          f"section {c_sec*1e3:9.2f} ms")
    print(f"speedup     : trajectory {py_traj/c_traj:6.1f}x   "
          f"section {py_sec/c_sec:6.1f}x")


if __name__ == "__main__":
    main()
