"""Low-level eigensolver kernels with optional numba acceleration.

The Sturm-count bisection and the inverse-iteration solves are the only
loops in the package that scale like N^2; everything else is vectorized
numpy.  Each hot kernel therefore exists twice:

* a numba ``@njit`` version built from plain scalar loops, and
* a pure-numpy version (bisection is batched over shifts; inverse
  iteration falls back to the same sequential recurrence, uncompiled).

The compiled path is used when numba imports successfully.  Set the
environment variable ``PIBOX_DISABLE_JIT=1`` before importing pibox to
force the numpy path.  ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_EPS = float(np.finfo(np.float64).eps)
_TINY = float(np.finfo(np.float64).tiny)

_disabled = os.environ.get("PIBOX_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError("jit disabled by PIBOX_DISABLE_JIT")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):  # no-op decorator so every kernel has one definition
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def pivot_floor(e2):
    """Smallest admissible Sturm pivot for a reduced matrix with squared
    off-diagonals ``e2`` (keeps the recurrence free of division blowups)."""
    scale = float(e2.max()) if e2.size else 1.0
    return max(scale, 1.0) * _TINY / _EPS


def gershgorin_interval(d, e):
    """Enclosing interval [lo, hi] for all eigenvalues of tridiag(d, e)."""
    n = d.size
    r = np.zeros(n)
    if n > 1:
        r[:-1] += np.abs(e)
        r[1:] += np.abs(e)
    lo = float(np.min(d - r))
    hi = float(np.max(d + r))
    pad = 16.0 * _EPS * max(abs(lo), abs(hi)) + 16.0 * _TINY
    return lo - pad, hi + pad


# ---------------------------------------------------------------------------
# Sturm counts
# ---------------------------------------------------------------------------

@njit(cache=True)
def sturm_count_loops(d, e2, sigma, pivmin):
    """Number of eigenvalues of tridiag(d, sqrt(e2)) strictly below sigma."""
    n = d.shape[0]
    q = d[0] - sigma
    count = 1 if q < 0.0 else 0
    for i in range(1, n):
        if abs(q) < pivmin:
            q = -pivmin
        q = d[i] - sigma - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def sturm_count_numpy(d, e2, sigmas, pivmin):
    """Vectorized Sturm counts for a batch of shifts."""
    sigmas = np.atleast_1d(np.asarray(sigmas, dtype=np.float64))
    q = d[0] - sigmas
    count = (q < 0.0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        q = d[i] - sigmas - e2[i - 1] / q
        count += q < 0.0
    return count


# ---------------------------------------------------------------------------
# Bisection
# ---------------------------------------------------------------------------

MAX_BISECT_ITER = 128


@njit(cache=True)
def bisect_spectrum_loops(d, e2, idx_lo, idx_hi, lo0, hi0, pivmin):
    """Eigenvalues with ascending indices idx_lo..idx_hi via Sturm bisection.

    Each interval is narrowed until it reaches floating-point resolution,
    so the returned midpoints are accurate to a few ulps of the spectral
    scale regardless of clustering.
    """
    m = idx_hi - idx_lo + 1
    out = np.empty(m, dtype=np.float64)
    for j in range(m):
        target = idx_lo + j + 1
        lo = lo0
        hi = hi0
        for _ in range(MAX_BISECT_ITER):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if hi - lo <= 2.0 * _EPS * max(abs(lo), abs(hi)) + 2.0 * _TINY:
                break
            n = d.shape[0]
            q = d[0] - mid
            count = 1 if q < 0.0 else 0
            for i in range(1, n):
                if abs(q) < pivmin:
                    q = -pivmin
                q = d[i] - mid - e2[i - 1] / q
                if q < 0.0:
                    count += 1
            if count >= target:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
    return out


def bisect_spectrum_numpy(d, e2, idx_lo, idx_hi, lo0, hi0, pivmin):
    """Same contract as ``bisect_spectrum_loops`` with all requested
    eigenvalue brackets advanced in lockstep (one batched Sturm sweep
    per bisection step)."""
    m = idx_hi - idx_lo + 1
    lo = np.full(m, lo0, dtype=np.float64)
    hi = np.full(m, hi0, dtype=np.float64)
    targets = np.arange(idx_lo + 1, idx_hi + 2, dtype=np.int64)
    for _ in range(MAX_BISECT_ITER):
        tol = 2.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi)) + 2.0 * _TINY
        mid = 0.5 * (lo + hi)
        active = (hi - lo > tol) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        counts = sturm_count_numpy(d, e2, mid[active], pivmin)
        go_down = counts >= targets[active]
        hi[active] = np.where(go_down, mid[active], hi[active])
        lo[active] = np.where(go_down, lo[active], mid[active])
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Inverse iteration (real symmetric tridiagonal, shifted LU with pivoting)
# ---------------------------------------------------------------------------

def _inverse_iteration_impl(d, e, lam, b, pivmin, max_sweeps, resid_tol):
    """One inverse-iteration run from start vector b.

    Returns (v, resid) with v 2-normalized and resid = ||T v - lam v||_2.
    The shifted matrix is factored once (partial pivoting, LAPACK gttrf
    layout) and reused across sweeps.
    """
    n = d.shape[0]
    dd = np.empty(n, dtype=np.float64)
    dl = np.empty(n, dtype=np.float64)
    du = np.empty(n, dtype=np.float64)
    du2 = np.zeros(n, dtype=np.float64)
    swap = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        dd[i] = d[i] - lam
    for i in range(n - 1):
        dl[i] = e[i]
        du[i] = e[i]
    dl[n - 1] = 0.0
    du[n - 1] = 0.0

    for i in range(n - 1):
        if abs(dd[i]) >= abs(dl[i]):
            if abs(dd[i]) < pivmin:
                dd[i] = pivmin
            fact = dl[i] / dd[i]
            dl[i] = fact
            dd[i + 1] = dd[i + 1] - fact * du[i]
        else:
            fact = dd[i] / dl[i]
            dd[i] = dl[i]
            dl[i] = fact
            tmp = du[i]
            du[i] = dd[i + 1]
            dd[i + 1] = tmp - fact * dd[i + 1]
            du2[i] = du[i + 1]
            du[i + 1] = -fact * du[i + 1]
            swap[i] = True
    if abs(dd[n - 1]) < pivmin:
        dd[n - 1] = pivmin

    v = b.copy()
    resid = np.inf
    for _ in range(max_sweeps):
        # forward elimination
        for i in range(n - 1):
            if swap[i]:
                tmp = v[i]
                v[i] = v[i + 1]
                v[i + 1] = tmp - dl[i] * v[i + 1]
            else:
                v[i + 1] = v[i + 1] - dl[i] * v[i]
        # back substitution
        v[n - 1] = v[n - 1] / dd[n - 1]
        if n > 1:
            v[n - 2] = (v[n - 2] - du[n - 2] * v[n - 1]) / dd[n - 2]
        for i in range(n - 3, -1, -1):
            v[i] = (v[i] - du[i] * v[i + 1] - du2[i] * v[i + 2]) / dd[i]
        # max-abs pre-scaling: a nearly singular solve can return entries
        # around 1e200 whose squares overflow the 2-norm accumulator
        vmax = 0.0
        for i in range(n):
            av = abs(v[i])
            if av > vmax:
                vmax = av
        if vmax == 0.0 or not np.isfinite(vmax):
            resid = np.inf
            break
        for i in range(n):
            v[i] /= vmax
        nrm = 0.0
        for i in range(n):
            nrm += v[i] * v[i]
        nrm = np.sqrt(nrm)
        for i in range(n):
            v[i] /= nrm
        # residual of the unshifted problem
        rsq = 0.0
        for i in range(n):
            acc = (d[i] - lam) * v[i]
            if i > 0:
                acc += e[i - 1] * v[i - 1]
            if i < n - 1:
                acc += e[i] * v[i + 1]
            rsq += acc * acc
        resid = np.sqrt(rsq)
        if resid <= resid_tol:
            break
    return v, resid


inverse_iteration_loops = njit(cache=True)(_inverse_iteration_impl)
inverse_iteration_numpy = _inverse_iteration_impl

if NUMBA_ENABLED:
    sturm_count = sturm_count_loops
    bisect_spectrum = bisect_spectrum_loops
    inverse_iteration = inverse_iteration_loops
else:
    def sturm_count(d, e2, sigma, pivmin):
        return int(sturm_count_numpy(d, e2, sigma, pivmin)[0])

    bisect_spectrum = bisect_spectrum_numpy
    inverse_iteration = inverse_iteration_numpy
