import numpy as np
import pytest

from pibox import (
    ComplexTridiagonal,
    LatticeGrid,
    LatticeWavefunction,
    MomentumExtension,
    PhysicalConfig,
    RobinParams,
    build_hamiltonian,
    build_p,
    build_p_backward,
    build_p_forward,
    build_p_i,
    build_p_r,
    build_parity,
    hermiticity_defect,
)


def test_grid_geometry():
    g = LatticeGrid(9, 1.0)
    assert g.spacing == pytest.approx(1.0 / 9)
    assert g.sites[0] == pytest.approx(-(1.0 - g.spacing) / 2)
    assert np.allclose(np.diff(g.sites), g.spacing)
    assert np.allclose(g.sites, -g.sites[::-1])


@pytest.mark.parametrize("n", [2, 1, -3, 8])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ValueError):
        LatticeGrid(n, 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        PhysicalConfig(mass=-1.0)
    with pytest.raises(ValueError):
        PhysicalConfig(box_length=0.0)
    with pytest.raises(ValueError):
        RobinParams(float("nan"), 0.0)
    with pytest.raises(ValueError):
        MomentumExtension(float("inf"), 0.0)


def test_hamiltonian_neumann_corner_stencil(cfg):
    h = build_hamiltonian(LatticeGrid(3, 1.0), cfg, RobinParams(0.0, 0.0))
    assert np.array_equal(h.diagonal, [4.5, 9.0, 4.5])
    assert np.array_equal(h.superdiagonal, [-4.5, -4.5])
    assert np.array_equal(h.subdiagonal, [-4.5, -4.5])


def test_hamiltonian_robin_corner_term(cfg):
    h = build_hamiltonian(LatticeGrid(3, 1.0), cfg, RobinParams(2.0, 0.0))
    # gamma_plus/(2 m a) = 3 lands on the last diagonal entry
    assert np.array_equal(h.diagonal, [4.5, 9.0, 7.5])


def test_hamiltonian_dirichlet_ghost_corner(cfg):
    h = build_hamiltonian(LatticeGrid(3, 1.0), cfg, RobinParams.dirichlet())
    assert np.array_equal(h.diagonal, [13.5, 9.0, 13.5])


def test_hamiltonian_potential_and_errors(cfg):
    g = LatticeGrid(5, 1.0)
    v = np.arange(5.0)
    h = build_hamiltonian(g, cfg, RobinParams(0.0, 0.0), v)
    h0 = build_hamiltonian(g, cfg, RobinParams(0.0, 0.0))
    assert np.allclose(h.diagonal - h0.diagonal, v, rtol=0, atol=1e-13)
    with pytest.raises(ValueError):
        build_hamiltonian(g, cfg, RobinParams(0.0, 0.0), np.array([1.0, np.inf, 0, 0, 0]))
    with pytest.raises(ValueError):
        build_hamiltonian(g, cfg, RobinParams(0.0, 0.0), np.zeros(4))


def test_p_forward_entries(cfg):
    g = LatticeGrid(3, 1.0)
    pf = build_p_forward(g, MomentumExtension(1.0, 1.0)).to_dense()
    expected = np.array(
        [[3j, -3j, 0], [0, 3j, -3j], [0, 0, 3.0]], dtype=complex
    )
    assert np.array_equal(pf, expected)


def test_p_forward_zero_extension(cfg):
    pf = build_p_forward(LatticeGrid(3, 1.0), MomentumExtension(0.0, 0.0))
    assert pf.diagonal[-1] == 0.0


def test_p_backward_entries(cfg):
    g = LatticeGrid(3, 1.0)
    pb = build_p_backward(g, MomentumExtension(1.0, 1.0)).to_dense()
    expected = np.array(
        [[-3.0, 0, 0], [3j, -3j, 0], [0, 3j, -3j]], dtype=complex
    )
    assert np.array_equal(pb, expected)


@pytest.mark.parametrize("ells", [(1.0, 1.0), (0.5, -0.7), (0.0, 2.0)])
def test_parity_maps_forward_to_backward(ells):
    # holds only for equal extension parameters
    g = LatticeGrid(9, 1.0)
    ext = MomentumExtension(ells[0], ells[0])
    u = build_parity(g)
    pf = build_p_forward(g, ext).to_dense()
    pb = build_p_backward(g, ext).to_dense()
    assert np.array_equal(u @ pf @ u, -pb)
    assert np.array_equal(u @ pb @ u, -pf)


def test_p_r_corners_binding_example():
    g = LatticeGrid(3, 1.0)  # a = 1/3
    pr = build_p_r(g, MomentumExtension(1.0, 1.0))
    assert pr.diagonal[0] == -1.5
    assert pr.diagonal[-1] == 1.5
    assert hermiticity_defect(pr) == 0.0


@pytest.mark.parametrize("ells", [(1.0, 1.0), (-1.0, -1.0), (0.3, -2.5), (0.0, 0.0)])
def test_p_r_equals_quarter_combination(ells):
    g = LatticeGrid(9, 1.0)
    ext = MomentumExtension(*ells)
    pf = build_p_forward(g, ext).to_dense()
    pb = build_p_backward(g, ext).to_dense()
    quarter = 0.25 * (pf + pf.conj().T + pb + pb.conj().T)
    pr = build_p_r(g, ext).to_dense()
    if all(e in (0.0, 1.0, -1.0) for e in ells):
        assert np.array_equal(quarter, pr)  # identical arithmetic, bit exact
    else:
        assert np.allclose(quarter, pr, rtol=0, atol=1e-14 / g.spacing)


@pytest.mark.parametrize("ells", [(1.0, 1.0), (0.3, -2.5), (0.0, 0.0)])
def test_p_i_from_antihermitian_combination(ells):
    g = LatticeGrid(9, 1.0)
    ext = MomentumExtension(*ells)
    pf = build_p_forward(g, ext).to_dense()
    pb = build_p_backward(g, ext).to_dense()
    anti = 0.25 * (pf - pf.conj().T + pb - pb.conj().T)
    assert np.allclose(anti, 1j * build_p_i(g).to_dense(), atol=1e-15)


def test_p_i_entries():
    pi_op = build_p_i(LatticeGrid(5, 1.0))
    assert np.array_equal(pi_op.diagonal, [2.5, 0, 0, 0, -2.5])
    assert np.all(pi_op.superdiagonal == 0)


def test_p_i_vanishes_on_parity_symmetric_states(rng):
    g = LatticeGrid(9, 1.0)
    half = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    values = np.concatenate([half, np.conj(half[-2::-1])])  # |psi(first)| = |psi(last)|
    psi = LatticeWavefunction(values, g)
    assert abs(psi.expectation(build_p_i(g))) < 1e-15


def test_p_r_p_i_do_not_commute(ext_i):
    g = LatticeGrid(9, 1.0)
    a = build_p_r(g, ext_i).to_dense()
    b = build_p_i(g).to_dense()
    assert np.max(np.abs(a @ b - b @ a)) > 0


def test_full_momentum_assembly(ext_i):
    g = LatticeGrid(9, 1.0)
    p = build_p(g, ext_i)
    expected = build_p_r(g, ext_i).to_dense() + 1j * build_p_i(g).to_dense()
    assert np.array_equal(p.to_dense(), expected)
    assert hermiticity_defect(p) > 0


def test_parity_is_involution():
    u = build_parity(LatticeGrid(7, 1.0))
    assert np.array_equal(u @ u, np.eye(7))


def test_parity_conjugation_of_p_r_and_hamiltonian(cfg, ext_i):
    g = LatticeGrid(9, 1.0)
    u = build_parity(g)
    pr = build_p_r(g, ext_i).to_dense()
    assert np.array_equal(u @ pr @ u, -pr)
    v_even = np.cos(np.pi * g.sites) ** 2
    h = build_hamiltonian(g, cfg, RobinParams(2.0, 2.0), v_even).to_dense()
    assert np.array_equal(u @ h @ u, h)
    pi_d = build_p_i(g).to_dense()
    assert np.array_equal(u @ pi_d @ u, -pi_d)


def test_hermiticity_defects():
    g = LatticeGrid(3, 1.0)
    ext = MomentumExtension(1.0, 1.0)
    assert hermiticity_defect(build_p_r(g, ext)) == 0.0
    assert hermiticity_defect(build_hamiltonian(g, PhysicalConfig(), RobinParams(2.0, 2.0))) == 0.0
    # forward derivative: diagonal defect 2/a dominates
    assert hermiticity_defect(build_p_forward(g, ext)) == 6.0


@pytest.mark.parametrize("ells", [(0.0, 0.0), (1.0, -1.0), (3.7, 0.2)])
def test_hermiticity_for_all_real_extension_parameters(ells, cfg):
    g = LatticeGrid(11, 1.0)
    assert hermiticity_defect(build_p_r(g, MomentumExtension(*ells))) == 0.0


def test_tridiagonal_container_checks():
    with pytest.raises(ValueError):
        ComplexTridiagonal(np.zeros(3), np.zeros(3), np.zeros(2))
    a = ComplexTridiagonal(np.array([1.0, 2.0]), np.array([3j]), np.array([-3j]))
    assert a.is_hermitian()
    assert np.array_equal(a.adjoint().to_dense(), a.to_dense().conj().T)
    v = np.array([1.0 + 0j, 2.0])
    assert np.array_equal(a.matvec(v), a.to_dense() @ v)


def test_wavefunction_weighted_inner_product():
    g = LatticeGrid(9, 1.0)
    psi = LatticeWavefunction(np.ones(9), g)
    assert psi.norm() == pytest.approx(1.0)  # a * N = L = 1
    assert psi.normalized().norm() == pytest.approx(1.0)
