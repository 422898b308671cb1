#!/usr/bin/env python3
"""Timing comparison of the pibox eigensolver kernels: numba-compiled
loops against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py

Setting PIBOX_DISABLE_JIT=1 makes the whole package use the numpy path;
this script imports both implementations directly so it always compares
the two regardless of the flag.
"""

import time

import numpy as np

from pibox import LatticeGrid, PhysicalConfig, RobinParams, build_hamiltonian
from pibox import _kernels
from pibox.eigensolver import phase_reduce


def time_call(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_bisection(n_sites):
    cfg = PhysicalConfig()
    grid = LatticeGrid(n_sites, 1.0)
    h = build_hamiltonian(grid, cfg, RobinParams(2.0, 2.0))
    d, e, _ = phase_reduce(h)
    e2 = e * e
    pivmin = _kernels.pivot_floor(e2)
    lo, hi = _kernels.gershgorin_interval(d, e)
    args = (d, e2, 0, n_sites - 1, lo, hi, pivmin)

    t_numpy, v_numpy = time_call(lambda: _kernels.bisect_spectrum_numpy(*args))
    if _kernels.NUMBA_ENABLED:
        _kernels.bisect_spectrum_loops(*args)  # compile outside the timer
        t_numba, v_numba = time_call(lambda: _kernels.bisect_spectrum_loops(*args))
        assert np.max(np.abs(np.asarray(v_numba) - v_numpy)) < 1e-9 * max(abs(lo), abs(hi))
    else:
        t_numba = float("nan")
    return t_numba, t_numpy


def bench_inverse_iteration(n_sites, n_vectors=16):
    cfg = PhysicalConfig()
    grid = LatticeGrid(n_sites, 1.0)
    h = build_hamiltonian(grid, cfg, RobinParams(2.0, 2.0))
    d, e, _ = phase_reduce(h)
    e2 = e * e
    pivmin = _kernels.pivot_floor(e2)
    lo, hi = _kernels.gershgorin_interval(d, e)
    lams = _kernels.bisect_spectrum_numpy(d, e2, 0, n_vectors - 1, lo, hi, pivmin)
    rng = np.random.default_rng(0)
    starts = rng.standard_normal((n_vectors, n_sites))
    starts /= np.linalg.norm(starts, axis=1, keepdims=True)

    def run(fn):
        for lam, b in zip(lams, starts):
            fn(d, e, lam, b.copy(), pivmin, 8, 1e-11 * hi)

    t_numpy, _ = time_call(lambda: run(_kernels.inverse_iteration_numpy))
    if _kernels.NUMBA_ENABLED:
        run(_kernels.inverse_iteration_loops)  # compile outside the timer
        t_numba, _ = time_call(lambda: run(_kernels.inverse_iteration_loops))
    else:
        t_numba = float("nan")
    return t_numba, t_numpy


def main():
    print(f"numba available: {_kernels.NUMBA_ENABLED} (active backend: {_kernels.BACKEND})")
    print()
    print(f"{'kernel':<34}{'N':>6}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>9}")
    for n_sites in (201, 999, 2001):
        t_nb, t_np = bench_bisection(n_sites)
        ratio = t_np / t_nb if t_nb == t_nb else float("nan")
        print(f"{'bisection (all eigenvalues)':<34}{n_sites:>6}{t_nb:>12.4f}{t_np:>12.4f}{ratio:>8.1f}x")
    for n_sites in (201, 999, 2001):
        t_nb, t_np = bench_inverse_iteration(n_sites)
        ratio = t_np / t_nb if t_nb == t_nb else float("nan")
        print(f"{'inverse iteration (16 vectors)':<34}{n_sites:>6}{t_nb:>12.4f}{t_np:>12.4f}{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
