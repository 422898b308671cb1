"""Roots of the energy and momentum quantization conditions.

All four conditions have the unimodular form exp(i*phase_lhs(k)) =
exp(i*phase_rhs(k)) for real k, so each is solved through a continuous
real phase function F(k); a root with integer label n satisfies
F(k) = 2*pi*n.  Working with phases (instead of moduli of the complex
condition) avoids spurious roots and gives clean bracketing:

* energy, continuum:  F(k) = 2kL + 2*atan2(k, g+) + 2*atan2(k, g-)
* energy, lattice:    F(k) = 2k(L-a) + 2*atan2(s, g+ + (cos(ka)-1)/a)
                      + ... with s = sin(ka)/a  (same reduction)
* momentum, continuum: constant right-hand phase, roots in closed form
* momentum, lattice:  F(k) = 2k(L-a) + 2*atan2(sin(ka) - ell+, cos(ka))
                      + 2*atan2(sin(ka) + ell-, cos(ka))

Lattice momentum roots live in the half zone |k| < pi/(2a), where the
dispersion k_hat = sin(ka)/a is injective, so eigenvalues and roots are
in one-to-one correspondence.  Negative Robin couplings additionally
support boundary-localized states with k = i*kappa and E = -kappa^2/2m,
found by scanning the real continuation of the condition.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeGrid, MomentumExtension, PhysicalConfig, RobinParams

__all__ = [
    "RootSet",
    "RootScanError",
    "solve_energy_continuum",
    "solve_energy_lattice",
    "solve_momentum_continuum",
    "solve_momentum_lattice",
]

#: back-substitution residual |lhs - rhs| accepted for every returned root
RESIDUAL_BOUND = 1e-10

_BISECT_XTOL = 1e-13
_DEDUP_TOL = 1e-12


class RootScanError(RuntimeError):
    """A scan found no bracket, or the root count contradicts the model."""


@dataclass
class RootSet:
    """Labeled roots of one quantization condition.

    ``labels`` follow the ascending-energy (or integer momentum) indexing:
    energy problems label bound states first, continuing through the real
    roots, starting at 1 for hard walls and at 0 otherwise; momentum
    problems use the signed integer from the phase level. ``residuals``
    are |lhs - rhs| of the condition at each real root.
    """

    kind: str
    real_roots: np.ndarray
    labels: np.ndarray
    residuals: np.ndarray
    energies: np.ndarray | None = None
    bound_roots: np.ndarray | None = None
    bound_energies: np.ndarray | None = None
    k_hat: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def _bisect(f, a, b, fa, fb, xtol=_BISECT_XTOL):
    """Plain bisection on a bracketed sign change, to |b - a| <= xtol."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise RootScanError(f"lost bracket on [{a}, {b}]")
    while b - a > xtol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _phase_roots(phase, k_grid):
    """All (k, n) with phase(k) = 2*pi*n bracketed on the scan grid.

    One pass over adjacent grid pairs; each pair is bisected once per
    integer level it straddles, so the cost is O(grid + roots) rather
    than O(levels * grid)."""
    values = phase(k_grid)
    two_pi = 2.0 * math.pi
    lo_lvl = np.ceil(np.minimum(values[:-1], values[1:]) / two_pi - 1e-12)
    hi_lvl = np.floor(np.maximum(values[:-1], values[1:]) / two_pi + 1e-12)
    roots, labels = [], []
    for i in np.nonzero(hi_lvl >= lo_lvl)[0]:
        for n in range(int(lo_lvl[i]), int(hi_lvl[i]) + 1):
            target = two_pi * n
            ga, gb = values[i] - target, values[i + 1] - target
            if ga * gb > 0:
                continue
            k = _bisect(lambda x: phase(np.asarray([x]))[0] - target,
                        k_grid[i], k_grid[i + 1], ga, gb)
            roots.append(k)
            labels.append(n)
    return roots, labels


def _check_residuals(residuals, kind):
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > RESIDUAL_BOUND:
        raise RootScanError(
            f"{kind}: back-substitution residual {worst:.3e} exceeds {RESIDUAL_BOUND}"
        )


def _dedupe(roots, labels, tol):
    order = np.argsort(roots)
    out_r, out_l = [], []
    for i in order:
        if out_r and abs(roots[i] - out_r[-1]) <= tol:
            continue
        out_r.append(roots[i])
        out_l.append(labels[i])
    return np.asarray(out_r), np.asarray(out_l, dtype=int)


# ---------------------------------------------------------------------------
# energy, continuum
# ---------------------------------------------------------------------------

def _robin_phase(k, gamma):
    """Continuous branch of arg((gamma + i k)) for k >= 0; zero in the
    hard-wall limit."""
    if math.isinf(gamma):
        return np.zeros_like(k)
    return np.arctan2(k, gamma)


def _energy_continuum_rhs(k: complex, robin: RobinParams) -> complex:
    num, den = 1.0 + 0.0j, 1.0 + 0.0j
    for g in (robin.gamma_plus, robin.gamma_minus):
        if math.isinf(g):
            continue
        num *= g - 1j * k
        den *= g + 1j * k
    return num / den


def energy_continuum_residual(cfg: PhysicalConfig, robin: RobinParams, k: complex) -> float:
    L = cfg.box_length
    return abs(cmath.exp(2j * k * L) - _energy_continuum_rhs(k, robin))


def _zero_mode_exists(robin: RobinParams, L: float) -> bool:
    # a constant-plus-linear state at E = 0 exists iff the boundary system
    # is degenerate: gamma+ + gamma- + gamma+ gamma- L = 0
    if robin.dirichlet_plus or robin.dirichlet_minus:
        return False
    gp, gm = robin.gamma_plus, robin.gamma_minus
    scale = max(1.0, abs(gp), abs(gm), abs(gp * gm * L))
    return abs(gp + gm + gp * gm * L) <= 1e-14 * scale


def solve_energy_continuum(cfg: PhysicalConfig, robin: RobinParams, k_max: float | None = None) -> RootSet:
    """All energy roots with 0 < k <= k_max, plus boundary-bound states
    (k = i*kappa, E = -kappa^2/2m) when a Robin coupling is negative.

    A zero mode (E = 0) is included when the boundary conditions support
    one (Neumann being the standard case).
    """
    L = cfg.box_length
    if k_max is None:
        k_max = 50.0 * math.pi / L
    if k_max <= 0:
        raise ValueError("k_max must be positive")

    def phase(k):
        return 2.0 * k * L + 2.0 * _robin_phase(k, robin.gamma_plus) + 2.0 * _robin_phase(k, robin.gamma_minus)

    resolution = math.pi / (20.0 * L)
    n_scan = int(math.ceil(k_max / resolution)) + 1
    k_grid = np.linspace(0.0, k_max, n_scan)
    roots, _ = _phase_roots(phase, k_grid)
    roots = [k for k in roots if k > 1e-9 * math.pi / L]
    roots, _ = _dedupe(roots, list(range(len(roots))), _DEDUP_TOL)
    if roots.size == 0 and not _zero_mode_exists(robin, L):
        raise RootScanError(
            f"no energy roots in (0, {k_max}] at scan resolution {resolution:.3e}"
        )

    bound = _bound_roots(cfg, robin)

    zero = [0.0] if _zero_mode_exists(robin, L) else []
    real_roots = np.concatenate([zero, roots])
    energies = real_roots**2 / (2.0 * cfg.mass)
    # the zero mode is appended from its own degeneracy condition, so its
    # residual is zero by construction (the k > 0 form degenerates there)
    residuals = np.array(
        [0.0] * len(zero) + [energy_continuum_residual(cfg, robin, k) for k in roots]
    )

    _check_residuals(residuals, "energy_continuum")
    first = 1 if robin.is_dirichlet else 0
    labels = np.arange(first + bound.size, first + bound.size + real_roots.size)
    return RootSet(
        kind="energy_continuum",
        real_roots=real_roots,
        labels=labels,
        residuals=residuals,
        energies=energies,
        bound_roots=bound,
        bound_energies=-(bound**2) / (2.0 * cfg.mass),
        meta={"k_max": k_max, "scan_resolution": resolution, "first_label": first},
    )


def _bound_roots(cfg: PhysicalConfig, robin: RobinParams) -> np.ndarray:
    """kappa > 0 with exp(-2 kappa L) (g+ - kappa)(g- - kappa) =
    (g+ + kappa)(g- + kappa); pole-free polynomial-style form."""
    if robin.dirichlet_plus or robin.dirichlet_minus:
        return np.asarray([])
    gp, gm = robin.gamma_plus, robin.gamma_minus
    if min(gp, gm) >= 0.0:
        return np.asarray([])
    L = cfg.box_length

    def condition(kappa):
        return np.exp(-2.0 * kappa * L) * (gp - kappa) * (gm - kappa) - (gp + kappa) * (gm + kappa)

    kappa_max = 10.0 * max(abs(gp), abs(gm))
    grid = np.arange(1e-3, kappa_max + 1e-3, 1e-3)
    vals = condition(grid)
    roots = []
    for i in np.nonzero(vals[:-1] * vals[1:] <= 0)[0]:
        if vals[i] == 0.0 and i > 0:
            continue
        roots.append(_bisect(lambda x: float(condition(np.asarray([x]))[0]),
                              grid[i], grid[i + 1], vals[i], vals[i + 1]))
    roots = sorted(r for r in roots if r > 1e-9)
    # descending kappa = ascending energy
    return np.asarray(roots[::-1])


# ---------------------------------------------------------------------------
# energy, lattice
# ---------------------------------------------------------------------------

def _energy_lattice_rhs(k, grid: LatticeGrid, cfg: PhysicalConfig, robin: RobinParams):
    a = grid.spacing
    e_term = (2.0 / a) * (1.0 - np.cos(k * a))  # 2 m E a with E on the lattice dispersion
    out = 1.0 + 0.0j
    for g in (robin.gamma_plus, robin.gamma_minus):
        num = g + (1.0 - np.exp(1j * k * a)) / a - e_term
        den = g + (1.0 - np.exp(-1j * k * a)) / a - e_term
        out = out * num / den
    return out


def energy_lattice_residual(grid: LatticeGrid, cfg: PhysicalConfig, robin: RobinParams, k: float) -> float:
    L = grid.box_length
    a = grid.spacing
    return abs(cmath.exp(2j * k * (L - a)) - complex(_energy_lattice_rhs(k, grid, cfg, robin)))


def lattice_dispersion_energy(grid: LatticeGrid, cfg: PhysicalConfig, k):
    """E(k) = ((2/a) sin(ka/2))^2 / 2m, the lattice energy of wavenumber k."""
    a = grid.spacing
    return (2.0 / a * np.sin(0.5 * k * a)) ** 2 / (2.0 * cfg.mass)


def solve_energy_lattice(
    grid: LatticeGrid,
    cfg: PhysicalConfig,
    robin: RobinParams,
    k_max: float | None = None,
) -> RootSet:
    """Real-k roots of the lattice energy quantization condition.

    Requires finite Robin couplings (the hard-wall limit is covered by
    the ghost-stencil Hamiltonian and the eigensolver instead).  Energies
    attach through the lattice dispersion, and the root count never
    exceeds the number of sites.
    """
    if robin.dirichlet_plus or robin.dirichlet_minus:
        raise ValueError("lattice energy condition needs finite Robin couplings")
    a = grid.spacing
    L = grid.box_length
    zone_edge = math.pi / a
    if k_max is None:
        k_max = zone_edge
    k_max = min(k_max, zone_edge)

    def phase(k):
        s = np.sin(k * a) / a
        shift = (np.cos(k * a) - 1.0) / a
        return (
            2.0 * k * (L - a)
            + 2.0 * np.arctan2(s, robin.gamma_plus + shift)
            + 2.0 * np.arctan2(s, robin.gamma_minus + shift)
        )

    # the phase function touches the level 2*pi*(N+1) exactly at the zone
    # edge without crossing it; scan strictly inside to keep that spurious
    # grazing contact out of the bracketing
    k_hi = k_max - 1e-9 * zone_edge
    resolution = math.pi / (20.0 * L)
    coarse = np.linspace(0.0, k_hi, int(math.ceil(k_hi / resolution)) + 1)
    # refine near the zone edge, where the phase branch turns over fastest
    edge_zone = min(2.0 * math.pi / L, k_hi)
    fine = np.linspace(k_hi - edge_zone, k_hi, int(math.ceil(edge_zone / (resolution * a / L))) + 1)
    k_grid = np.unique(np.concatenate([coarse, fine]))
    roots, _ = _phase_roots(phase, k_grid)
    roots = [k for k in roots if k > 1e-9 * math.pi / L]
    roots, _ = _dedupe(roots, list(range(len(roots))), _DEDUP_TOL)
    if roots.size > grid.num_sites:
        raise RootScanError(
            f"{roots.size} lattice energy roots exceed the {grid.num_sites}-site spectrum"
        )

    zero = [0.0] if _zero_mode_exists(robin, L) else []
    real_roots = np.concatenate([zero, roots])
    energies = lattice_dispersion_energy(grid, cfg, real_roots)
    residuals = np.array(
        [0.0] * len(zero) + [energy_lattice_residual(grid, cfg, robin, k) for k in roots]
    )
    _check_residuals(residuals, "energy_lattice")
    labels = np.arange(real_roots.size)
    return RootSet(
        kind="energy_lattice",
        real_roots=real_roots,
        labels=labels,
        residuals=residuals,
        energies=energies,
        meta={"k_max": k_max, "scan_resolution": resolution, "first_label": 0},
    )


# ---------------------------------------------------------------------------
# momentum, continuum
# ---------------------------------------------------------------------------

def _momentum_continuum_rhs(ext: MomentumExtension) -> complex:
    lp, lm = ext.lambda_plus, ext.lambda_minus
    return (1.0 + lp) * (1.0 - lm) / ((1.0 - lp) * (1.0 + lm))


def momentum_continuum_residual(cfg: PhysicalConfig, ext: MomentumExtension, k: float) -> float:
    return abs(cmath.exp(2j * k * cfg.box_length) - _momentum_continuum_rhs(ext))


def solve_momentum_continuum(cfg: PhysicalConfig, ext: MomentumExtension, k_max: float | None = None) -> RootSet:
    """Momentum roots in (-k_max, k_max], in closed form.

    The right-hand side of the condition is a k-independent unit-modulus
    number for purely imaginary extension parameters, so the roots are
    k_n = (theta + 2 pi n)/(2L) with theta its principal phase.
    """
    L = cfg.box_length
    if k_max is None:
        k_max = 20.0 * math.pi / L
    rhs = _momentum_continuum_rhs(ext)
    if abs(abs(rhs) - 1.0) > 1e-14:
        raise RootScanError(f"condition right-hand side has modulus {abs(rhs)}, expected 1")
    theta = cmath.phase(rhs)
    n_lo = int(math.ceil((-2.0 * k_max * L - theta) / (2.0 * math.pi)))
    n_hi = int(math.floor((2.0 * k_max * L - theta) / (2.0 * math.pi)))
    labels = np.arange(n_lo, n_hi + 1)
    roots = (theta + 2.0 * math.pi * labels) / (2.0 * L)
    keep = roots > -k_max
    roots, labels = roots[keep], labels[keep]
    residuals = np.array([momentum_continuum_residual(cfg, ext, k) for k in roots])
    _check_residuals(residuals, "momentum_continuum")
    return RootSet(
        kind="momentum_continuum",
        real_roots=roots,
        labels=labels,
        residuals=residuals,
        meta={"k_max": k_max, "rhs_phase": theta},
    )


# ---------------------------------------------------------------------------
# momentum, lattice
# ---------------------------------------------------------------------------

def _momentum_lattice_rhs(k, grid: LatticeGrid, ext: MomentumExtension):
    a = grid.spacing
    z = np.exp(1j * k * a)
    lp, lm = ext.lambda_plus, ext.lambda_minus
    return (1.0 + lp * z) * (1.0 - lm * z) / ((z - lp) * (z + lm))


def momentum_lattice_residual(grid: LatticeGrid, ext: MomentumExtension, k: float) -> float:
    L = grid.box_length
    return abs(cmath.exp(2j * k * L) - complex(_momentum_lattice_rhs(k, grid, ext)))


def solve_momentum_lattice(grid: LatticeGrid, ext: MomentumExtension) -> RootSet:
    """The N momentum roots in the half zone (-pi/2a, pi/2a), labeled by
    their phase level, together with the physical eigenvalues
    k_hat = sin(ka)/a.

    Raises RootScanError when fewer than N real roots exist there (for
    |ell| > 1 part of the spectrum moves to complex k, i.e. eigenvectors
    localized at the walls).
    """
    a = grid.spacing
    L = grid.box_length
    n_sites = grid.num_sites
    edge = 0.5 * math.pi / a

    def phase(k):
        ka = k * a
        return (
            2.0 * k * (L - a)
            + 2.0 * np.arctan2(np.sin(ka) - ext.ell_plus, np.cos(ka))
            + 2.0 * np.arctan2(np.sin(ka) + ext.ell_minus, np.cos(ka))
        )

    resolution = math.pi / (20.0 * L)
    margin = 1e-9 * edge
    coarse = np.linspace(-edge + margin, edge - margin, 2 * int(math.ceil(edge / resolution)) + 1)
    fine_width = min(2.0 * math.pi / L, edge)
    fine_res = resolution * a / L
    fine_hi = np.linspace(edge - fine_width, edge - margin, int(math.ceil(fine_width / fine_res)) + 1)
    fine_lo = -fine_hi[::-1]
    k_grid = np.unique(np.concatenate([coarse, fine_lo, fine_hi]))

    roots, labels = _phase_roots(phase, k_grid)
    roots, labels = _dedupe(roots, labels, _DEDUP_TOL)
    if roots.size != n_sites:
        raise RootScanError(
            f"found {roots.size} lattice momentum roots, expected {n_sites}; "
            "extension parameters with |ell| > 1 push states off the real window"
        )
    residuals = np.array([momentum_lattice_residual(grid, ext, k) for k in roots])
    _check_residuals(residuals, "momentum_lattice")
    k_hat = np.sin(roots * a) / a
    return RootSet(
        kind="momentum_lattice",
        real_roots=roots,
        labels=labels,
        residuals=residuals,
        k_hat=k_hat,
        meta={"window": (-edge, edge), "scan_resolution": resolution},
    )
