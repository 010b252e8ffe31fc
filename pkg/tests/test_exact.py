import numpy as np
import pytest
import scipy.sparse as sp

from cavity_pingpong.errors import ConvergenceError
from cavity_pingpong.exact import (BorderedSolver, FockBasis, build_hamiltonian,
                                   build_liouvillian, cutoff_seed, diffusion_time_domain,
                                   exact_diffusion, exact_friction, expectation, friction_sign,
                                   hamiltonian, solve_exact, steady_state,
                                   steady_state_derivative, unvec, vec)
from cavity_pingpong.model import SystemParams, alpha0
from cavity_pingpong.presets import NARROW_LINE, BROAD_LINE

from oracles import liouvillian as dense_liouvillian


def test_hamiltonian_elements():
    b = FockBasis(4)
    H = hamiltonian(b, 1.3, 0.4, 0.7, 0.2 + 0.1j).toarray()
    assert np.allclose(H, H.conj().T)
    for n in range(4):
        assert H[b.index(1, n), b.index(0, n + 1)] == pytest.approx(0.7 * np.sqrt(n + 1))
        assert H[b.index(0, n + 1), b.index(0, n)] == pytest.approx((0.2 + 0.1j) * np.sqrt(n + 1))
    assert H[b.index(1, 2), b.index(1, 2)] == pytest.approx(1.3 + 2 * 0.4)


def test_uncoupled_undriven_hamiltonian_is_diagonal():
    H = hamiltonian(FockBasis(5), 1.3, 0.4, 0.0, 0.0).toarray()
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


def test_basis_validation():
    with pytest.raises(ValueError):
        FockBasis(0)
    assert FockBasis(3).dim == 8


def test_liouvillian_matches_dense_reference():
    b = FockBasis(3)
    p = NARROW_LINE
    L = build_liouvillian(p, 0.1, b).matrix.toarray()
    H = build_hamiltonian(p, 0.1, b).toarray()
    o = b.ops
    ref = dense_liouvillian(H, [(p.gamma, o.sigma.toarray()), (p.kappa, o.a.toarray())])
    assert np.allclose(L, ref, atol=1e-14)


def test_liouvillian_preserves_trace_and_spectrum():
    b = FockBasis(3)
    L = build_liouvillian(NARROW_LINE, 0.0, b).matrix.toarray()
    tr = vec(np.eye(b.dim))
    assert np.abs(tr @ L).max() < 1e-13
    ev = np.linalg.eigvals(L)
    assert np.sum(np.abs(ev) < 1e-9) == 1
    assert ev.real.max() < 1e-9


def test_vectorization_identity():
    rng = np.random.default_rng(1)
    A, R, B = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
    assert np.allclose(np.kron(B.T, A) @ vec(R), vec(A @ R @ B))
    assert np.allclose(unvec(vec(R), 4), R)


def test_no_coupling_gives_coherent_cavity_and_ground_atom():
    p = NARROW_LINE
    sol = solve_exact(p, 0.25)
    assert sol.field == pytest.approx(-alpha0(p), abs=1e-8)
    assert sol.excited_population < 1e-8
    assert sol.photon_number == pytest.approx(p.N0, abs=1e-8)


def test_no_drive_gives_vacuum():
    p = NARROW_LINE.replace(E=0)
    sol = solve_exact(p, 0.0)
    ground_vac = FockBasis(sol.n_max).index(0, 0)
    assert abs(sol.rho[ground_vac, ground_vac] - 1) < 1e-12
    assert sol.diffusion() == pytest.approx(0, abs=1e-12)


def test_expectation_checks():
    b = FockBasis(2)
    rho = np.zeros((b.dim, b.dim), complex)
    rho[b.index(1, 2), b.index(1, 2)] = 1
    assert expectation(rho, b.ops.number) == pytest.approx(2)
    assert expectation(rho, b.ops.sigma_z) == pytest.approx(1)
    assert expectation(rho, b.ops.number.toarray()) == pytest.approx(2)
    with pytest.raises(ValueError):
        expectation(rho, FockBasis(3).ops.number)


def test_steady_state_properties():
    sol = solve_exact(BROAD_LINE, 0.0)
    rho = sol.rho
    assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
    assert np.allclose(rho, rho.conj().T)
    assert np.linalg.eigvalsh(rho)[0] > -1e-8
    L = sol.state.L.matrix
    assert np.abs(L @ vec(rho)).max() < 1e-10


def test_cutoff_seed():
    assert cutoff_seed(NARROW_LINE.replace(N0=1e-4)) == 8
    assert cutoff_seed(NARROW_LINE.replace(N0=100.0)) == 64
    assert cutoff_seed(NARROW_LINE.replace(N0=100.0), cap=20) == 20


def test_kappa_zero_rejected():
    with pytest.raises(ValueError):
        solve_exact(NARROW_LINE.replace(kappa=0.0), 0.0)


def test_convergence_error_carries_trajectory():
    p = SystemParams.from_photon_number(30.0, 0.1, 0.1, 0.0, 0.0)
    with pytest.raises(ConvergenceError) as err:
        solve_exact(p, 0.25, cap=10)
    assert err.value.trajectory and err.value.trajectory[-1][0] == 10


def test_cutoff_robustness():
    sol = solve_exact(NARROW_LINE, 0.0)
    big = solve_exact(NARROW_LINE, 0.0, n_max=2 * sol.n_max)
    for a, b in [(sol.photon_number, big.photon_number), (sol.diffusion(), big.diffusion()),
                 (sol.friction(), big.friction())]:
        assert abs(a - b) < 1e-5 * abs(b)


def _random_small(seed):
    rng = np.random.default_rng(seed)
    return SystemParams.from_photon_number(rng.uniform(0.05, 0.4), rng.uniform(0.1, 1),
                                           rng.uniform(0.2, 1), rng.uniform(-2, 2),
                                           rng.uniform(-2, 2)), rng.uniform(0, 0.2)


@pytest.mark.parametrize("seed", range(3))
def test_diffusion_matches_time_domain(seed):
    p, x = _random_small(seed)
    sol = solve_exact(p, x, n_max=5)
    D = sol.diffusion()
    Dt = diffusion_time_domain(sol.state.L, sol.rho, sol.ops.force)
    assert D == pytest.approx(Dt, rel=1e-6)


def test_steady_state_derivative_matches_finite_difference():
    p, x, n, h = BROAD_LINE, 0.05, 12, 1e-5
    b = FockBasis(n)
    g = p.g0 * np.cos(2 * np.pi * x)
    ss = steady_state(build_liouvillian(p, x, b))
    Y = steady_state_derivative(ss.L, ss.rho, b.ops.force, ss.solver)
    plus = steady_state(build_liouvillian(p, x, b, g=g + h)).rho
    minus = steady_state(build_liouvillian(p, x, b, g=g - h)).rho
    fd = (plus - minus) / (2 * h)
    assert np.abs(Y - fd).max() < 1e-4 * np.abs(fd).max()


def test_friction_vanishes_without_coupling():
    p = NARROW_LINE.replace(profile=lambda u: np.zeros_like(u))
    sol = solve_exact(p, 0.1)
    # the force vanishes; the scalar is the weak-field two-level friction of the bare atom
    assert abs(sol.axial_friction()) < 1e-10
    W2 = p.omega_a ** 2 + p.gamma ** 2
    assert sol.friction() == pytest.approx(4 * p.N0 * p.omega_a * p.gamma / W2 ** 2, rel=1e-6)


def test_friction_sign_calibrated():
    assert friction_sign() == 1


def test_traceless_solver_residual():
    b = FockBasis(6)
    L = build_liouvillian(BROAD_LINE, 0.0, b)
    solver = BorderedSolver(L)
    rng = np.random.default_rng(3)
    B = rng.normal(size=(b.dim, b.dim)) + 1j * rng.normal(size=(b.dim, b.dim))
    B -= np.trace(B) / b.dim * np.eye(b.dim)
    X = solver.traceless(B)
    assert abs(np.trace(X)) < 1e-12
    assert np.abs(L.matrix @ vec(X) - vec(B)).max() < 1e-10 * np.abs(B).max()


def test_exact_friction_explicit_sign():
    sol = solve_exact(NARROW_LINE, 0.0)
    G = exact_friction(sol.state.L, sol.rho, sol.ops.force, sol.state.solver, sign=1)
    assert exact_friction(sol.state.L, sol.rho, sol.ops.force, sol.state.solver, sign=-1) == -G
    assert exact_diffusion(sol.state.L, sol.rho) == pytest.approx(sol.diffusion())


def test_sparse_operators():
    o = FockBasis(3).ops
    assert sp.issparse(o.a) and o.a.shape == (8, 8)
    assert np.allclose((o.force - o.force.conj().T).toarray(), 0)
