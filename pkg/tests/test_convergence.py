import math

import numpy as np
import pytest

from pibox import (
    MomentumExtension,
    RobinParams,
    converge_energy,
    converge_momentum,
)


def test_dirichlet_ground_level_is_second_order(cfg):
    report = converge_energy(cfg, RobinParams.dirichlet(), 1, (27, 81, 243))
    assert report.fitted_order >= 1.8
    assert report.fit_residual <= 0.1
    assert np.all(np.diff(report.errors) < 0)
    assert report.meta["target"] == pytest.approx(math.pi**2 / 2.0, rel=1e-12)


def test_robin_errors_decrease_monotonically(cfg, robin2):
    report = converge_energy(cfg, robin2, 0, (27, 81, 243, 729))
    assert np.all(np.diff(report.errors) < 0)
    assert report.fitted_order > 0.8  # corner coupling converges at first order


def test_folded_wall_restores_second_order(cfg, robin2):
    report = converge_energy(cfg, robin2, 0, (27, 81, 243), boundary="folded")
    assert report.fitted_order >= 1.8


def test_bound_level_convergence(cfg):
    robin = RobinParams(-5.0, -5.0)
    report = converge_energy(cfg, robin, 0, (201, 603, 1809), boundary="folded")
    assert report.fitted_order >= 1.8
    assert report.meta["target"] < 0


def test_short_n_list_is_rejected(cfg):
    with pytest.raises(ValueError):
        converge_energy(cfg, RobinParams.dirichlet(), 1, (27,))
    with pytest.raises(ValueError):
        converge_energy(cfg, RobinParams.dirichlet(), 1, (27, 28, 81))
    with pytest.raises(ValueError):
        converge_energy(cfg, RobinParams.dirichlet(), 1, (81, 27, 243))


def test_momentum_dispersion_order(cfg, ext_i):
    report = converge_momentum(cfg, ext_i, 1, (27, 81, 243, 729))
    assert 1.9 <= report.fitted_order <= 2.1
    assert report.fit_residual <= 0.1
    # the measured errors are the dispersion defect k^3 a^2 / 6
    for n_sites, err in zip(report.N_list, report.errors):
        a = 1.0 / n_sites
        assert err == pytest.approx(math.pi**3 * a * a / 6.0, rel=0.01)


def test_momentum_zero_label_is_exact(cfg, ext_i):
    report = converge_momentum(cfg, ext_i, 0, (27, 81, 243))
    assert np.all(report.errors < 1e-13)
    assert math.isinf(report.fitted_order)


def test_momentum_mixed_extension_monotone(cfg):
    report = converge_momentum(cfg, MomentumExtension(1.0, 0.0), 1, (27, 81, 243))
    assert np.all(np.diff(report.errors) < 0)
    assert report.fitted_order >= 1.0


def test_unknown_level_is_rejected(cfg, ext_i):
    with pytest.raises(ValueError):
        converge_energy(cfg, RobinParams.dirichlet(), 0, (27, 81, 243))
    with pytest.raises(ValueError):
        converge_momentum(cfg, ext_i, 10_000, (27, 81, 243))
