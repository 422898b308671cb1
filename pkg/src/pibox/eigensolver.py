"""Certified eigensolver for Hermitian complex tridiagonal matrices.

A diagonal unitary similarity strips the phases of the off-diagonal
entries, leaving a real symmetric tridiagonal matrix whose eigenvalues
are found by Sturm-count bisection (provable bracketing: the count of
eigenvalues below any shift equals the sign-change count).  Eigenvectors
come from inverse iteration on the reduced matrix and are transformed
back with the stored phases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .lattice import ComplexTridiagonal, hermiticity_defect

__all__ = ["SpectrumResult", "ConvergenceError", "phase_reduce", "sturm_count", "eigh_tridiagonal"]

#: accepted residual ||A v - lam v||_2 / ||A||_max for returned eigenpairs
RESIDUAL_BOUND = 1e-10

#: eigenvalue gaps below this times the matrix scale are treated as one cluster
CLUSTER_GAP = 1e-12

_MAX_RESTARTS = 5
_HERMITICITY_TOL = 1e-13


class ConvergenceError(RuntimeError):
    """Raised when inverse iteration exhausts its restart budget."""


@dataclass
class SpectrumResult:
    """Eigenvalues in ascending order, optional eigenvectors (columns,
    normalized under the weighted inner product w * sum conj(u) v) and
    their relative residuals."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    residuals: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def phase_reduce(A: ComplexTridiagonal):
    """Diagonal unitary D with unit-modulus entries such that D^† A D is
    real symmetric tridiagonal with nonnegative off-diagonals.

    Returns (diagonal, off-diagonal moduli, phases); an eigenvector u of
    the reduced matrix maps back as D u.
    """
    scale = A.max_abs()
    if hermiticity_defect(A) > _HERMITICITY_TOL * max(scale, 1.0):
        raise ValueError("matrix is not Hermitian")
    e = A.superdiagonal
    # phase recurrence: each step cancels the argument of one off-diagonal
    increments = -np.angle(e)
    phi = np.concatenate(([0.0], np.cumsum(increments)))
    phases = np.exp(1j * phi)
    return A.diagonal.real.copy(), np.abs(e), phases


def sturm_count(A: ComplexTridiagonal, sigma: float) -> int:
    """Number of eigenvalues of A strictly below the shift sigma."""
    d, e, _ = phase_reduce(A)
    e2 = e * e
    return int(_kernels.sturm_count(d, e2, float(sigma), _kernels.pivot_floor(e2)))


def _clusters(values: np.ndarray, gap: float):
    """Group indices of ascending values separated by less than gap."""
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] < gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def eigh_tridiagonal(
    A: ComplexTridiagonal,
    want_vectors: bool = False,
    weight: float = 1.0,
    select: tuple[int, int] | None = None,
    seed: int = 0,
) -> SpectrumResult:
    """All (or an index range of) eigenvalues of a Hermitian complex
    tridiagonal matrix, with optional residual-checked eigenvectors.

    Parameters
    ----------
    A : Hermitian complex tridiagonal matrix.
    want_vectors : also compute eigenvectors and residuals.
    weight : inner-product weight (lattice spacing for sampled states);
        eigenvector columns v satisfy weight * ||v||_2^2 = 1.
    select : optional (lo, hi) inclusive range of ascending eigenvalue
        indices; default all.
    seed : seed of the inverse-iteration start vectors, recorded in meta.
    """
    d, e, phases = phase_reduce(A)
    n = d.size
    e2 = e * e
    pivmin = _kernels.pivot_floor(e2)
    scale = max(A.max_abs(), _kernels._TINY)

    if select is None:
        idx_lo, idx_hi = 0, n - 1
    else:
        idx_lo, idx_hi = select
        if not (0 <= idx_lo <= idx_hi <= n - 1):
            raise ValueError(f"select range {select} invalid for size {n}")

    lo, hi = _kernels.gershgorin_interval(d, e)
    eigenvalues = np.asarray(_kernels.bisect_spectrum(d, e2, idx_lo, idx_hi, lo, hi, pivmin))

    meta = {"backend": _kernels.BACKEND, "seed": seed, "select": (idx_lo, idx_hi)}
    if not want_vectors:
        return SpectrumResult(eigenvalues, meta=meta)

    rng = np.random.default_rng(seed)
    m = eigenvalues.size
    vectors = np.empty((n, m), dtype=np.float64)
    resid_tol = 0.1 * RESIDUAL_BOUND * scale

    for group in _clusters(eigenvalues, CLUSTER_GAP * scale):
        found: list[np.ndarray] = []
        for pos in group:
            lam = float(eigenvalues[pos])
            best_v, best_r = None, np.inf
            for _ in range(_MAX_RESTARTS):
                b = rng.standard_normal(n)
                for u in found:
                    b -= (u @ b) * u
                nb = np.linalg.norm(b)
                if nb == 0.0:
                    continue
                v, r = _kernels.inverse_iteration(d, e, lam, b / nb, pivmin, 8, resid_tol)
                if not np.all(np.isfinite(v)):
                    continue
                if found:
                    # modified Gram-Schmidt within the degenerate cluster
                    for u in found:
                        v = v - (u @ v) * u
                    nv = np.linalg.norm(v)
                    if nv < 1e-3:
                        continue  # collapsed onto the span already found
                    v = v / nv
                    r = _residual_real(d, e, lam, v)
                if r < best_r:
                    best_v, best_r = v, r
                if best_r <= resid_tol:
                    break
            if best_v is None or best_r > RESIDUAL_BOUND * scale:
                raise ConvergenceError(
                    f"inverse iteration failed for eigenvalue index {idx_lo + pos} "
                    f"(residual {best_r:.3e}, bound {RESIDUAL_BOUND * scale:.3e})"
                )
            found.append(best_v)
            vectors[:, pos] = best_v

    complex_vectors = phases[:, None] * vectors
    complex_vectors /= np.sqrt(weight)

    residuals = np.empty(m)
    for j in range(m):
        v = complex_vectors[:, j]
        r = A.matvec(v) - eigenvalues[j] * v
        residuals[j] = np.linalg.norm(r) / (scale * np.linalg.norm(v))

    return SpectrumResult(eigenvalues, complex_vectors, residuals, meta)


def _residual_real(d, e, lam, v):
    r = (d - lam) * v
    r[:-1] += e * v[1:]
    r[1:] += e * v[:-1]
    return float(np.linalg.norm(r))
