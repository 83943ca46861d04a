import math

import numpy as np
import pytest
import scipy.integrate

from trapexpand import (
    ContractError,
    DomainError,
    GridError,
    OCTState,
    SpatialGrid,
    bangbang_protocol,
    ermakov_residual,
    integrate_ermakov,
    invariant_expectation,
    lewis_phase,
    mode_wavefunction,
    polynomial_protocol,
    u_from_b,
    unconstrained_protocol,
)


def test_static_trap_is_fixed_point():
    traj = integrate_ermakov(lambda t: np.ones_like(t), OCTState(1.0, 0.0), 5.0)
    t = np.linspace(0, 5, 200)
    assert np.max(np.abs(traj.b(t) - 1.0)) < 1e-10
    assert np.max(np.abs(traj.bdot(t))) < 1e-10


def test_final_trap_is_fixed_point():
    gamma = 10.0
    traj = integrate_ermakov(
        lambda t: np.full_like(t, gamma**-4), OCTState(gamma, 0.0), 5.0
    )
    t = np.linspace(0, 5, 200)
    assert np.max(np.abs(traj.b(t) - gamma)) < 1e-9


@pytest.mark.parametrize("c", [0.5, 2.0, 5.0])
def test_constant_control_fixed_point_property(c):
    # u == c is stationary at b = c^(-1/4)
    b0 = c**-0.25
    traj = integrate_ermakov(lambda t: np.full_like(t, c), OCTState(b0, 0.0), 3.0)
    t = np.linspace(0, 3, 100)
    assert np.max(np.abs(traj.b(t) - b0)) < 1e-10


def test_integrate_matches_bangbang_closed_form():
    protocol, closed = bangbang_protocol(10.0, 1.0)
    traj = integrate_ermakov(protocol, OCTState(1.0, 0.0), protocol.tau_f)
    assert traj.b(protocol.tau_f) == pytest.approx(10.0, abs=1e-6)
    assert traj.bdot(protocol.tau_f) == pytest.approx(0.0, abs=1e-6)
    t = np.linspace(0, protocol.tau_f, 500)
    assert np.max(np.abs(traj.b(t) - closed.b(t))) < 1e-8


def test_integrate_rejects_bad_inputs():
    with pytest.raises(DomainError):
        integrate_ermakov(lambda t: np.ones_like(t), OCTState(1.0, 0.0), -1.0)
    with pytest.raises(DomainError):
        OCTState(-1.0, 0.0)


def test_integrate_reports_blowup():
    from trapexpand import DivergenceError, SingularTrajectoryError

    # a huge expulsive control drives b to overflow (or a compressive one
    # through zero); either way the failure names the offending time
    with pytest.raises((DivergenceError, SingularTrajectoryError)) as err:
        integrate_ermakov(
            lambda t: np.full_like(t, -1e8), OCTState(1.0, 0.0), 10.0, step=1e-3
        )
    assert 0.0 <= err.value.tau <= 10.0


def test_u_from_b_trivials():
    assert u_from_b(1.0, 0.0) == pytest.approx(1.0)
    assert u_from_b(10.0, 0.0) == pytest.approx(1e-4)
    with pytest.raises(DomainError):
        u_from_b(-1.0, 0.0)


def test_u_from_b_polynomial_midpoint():
    # quintic midpoint: b(tau_f/2) = (gamma+1)/2, u follows from the curvature
    protocol, traj = polynomial_protocol(6.0, 10.0)
    mid = 3.0
    assert traj.b(mid) == pytest.approx(5.5, rel=1e-12)
    assert u_from_b(traj.b(mid), traj.bddot(mid)) == pytest.approx(
        protocol.u(mid), rel=1e-12
    )


def test_residual_static():
    traj = integrate_ermakov(lambda t: np.ones_like(t), OCTState(1.0, 0.0), 4.0)
    assert ermakov_residual(traj, lambda t: np.ones_like(t)) < 1e-10


def test_residual_bangbang_closed_form():
    protocol, closed = bangbang_protocol(10.0, 1.0)
    assert ermakov_residual(closed, protocol) < 1e-9


def test_residual_integrated_fine_step():
    protocol, _ = bangbang_protocol(10.0, 1.0)
    traj = integrate_ermakov(protocol, OCTState(1.0, 0.0), protocol.tau_f, step=1e-4)
    assert ermakov_residual(traj, protocol) < 1e-6


def test_residual_reports_inf_on_failure():
    protocol, closed = bangbang_protocol(10.0, 1.0)

    def broken(t):
        raise RuntimeError("boom")

    assert ermakov_residual(closed, broken) == math.inf


# --- dynamical modes ------------------------------------------------------------


def test_mode_static_ground_state():
    grid = SpatialGrid(1024, 20.0)
    wf = mode_wavefunction(0, 1.0, 0.0, 0.0, grid)
    assert wf.norm() == pytest.approx(1.0, abs=1e-10)
    x2 = np.sum(np.abs(wf.amplitudes) ** 2 * grid.x**2) * grid.dx
    assert x2 == pytest.approx(0.5, rel=1e-10)


def test_mode_final_trap_width():
    gamma = 10.0
    grid = SpatialGrid(2048, 80.0)
    wf = mode_wavefunction(0, gamma, 0.0, 0.0, grid)
    x2 = np.sum(np.abs(wf.amplitudes) ** 2 * grid.x**2) * grid.dx
    assert x2 == pytest.approx(gamma**2 / 2, rel=1e-10)


def test_mode_orthogonality():
    grid = SpatialGrid(1024, 20.0)
    m0 = mode_wavefunction(0, 1.0, 0.0, 0.0, grid)
    m2 = mode_wavefunction(2, 1.0, 0.0, 0.0, grid)
    overlap = abs(np.vdot(m0.amplitudes, m2.amplitudes) * grid.dx)
    assert overlap < 1e-10


def test_mode_gram_matrix_orthonormal():
    grid = SpatialGrid(2048, 40.0)
    modes = [mode_wavefunction(n, 1.8, 0.6, 0.3, grid) for n in range(6)]
    gram = np.array(
        [[np.vdot(a.amplitudes, c.amplitudes) * grid.dx for c in modes] for a in modes]
    )
    assert np.max(np.abs(gram - np.eye(6))) < 1e-8


def test_mode_grid_too_coarse_raises():
    grid = SpatialGrid(256, 100.0)  # dx = 0.78, cannot resolve b = 0.5
    with pytest.raises(GridError):
        mode_wavefunction(3, 0.5, 0.0, 0.0, grid)


# --- Lewis phase ----------------------------------------------------------------


def test_phase_static_is_tau():
    _, traj = polynomial_protocol(4.0, 1.0)  # b == 1
    for tau in (0.0, 1.3, 4.0):
        assert lewis_phase(traj, tau) == pytest.approx(tau, abs=1e-10)


def test_phase_unconstrained_closed_form():
    gamma, tau_f = 10.0, 5.0
    _, traj = unconstrained_protocol(tau_f, gamma)
    expected = tau_f * math.log(gamma**2) / (gamma**2 - 1.0)
    assert lewis_phase(traj, tau_f) == pytest.approx(expected, abs=1e-10)


def test_phase_bangbang_against_adaptive_quadrature():
    protocol, traj = bangbang_protocol(10.0, 1.0)

    def integrand(t):
        return 1.0 / traj.b(t) ** 2

    expected, err = scipy.integrate.quad(
        integrand, 0.0, protocol.tau_f, points=protocol.switch_times,
        epsabs=1e-13, limit=200,
    )
    assert err < 1e-11
    assert lewis_phase(traj, protocol.tau_f) == pytest.approx(expected, abs=1e-10)
    # interior point too
    mid = 0.7 * protocol.tau_f
    expected_mid, _ = scipy.integrate.quad(
        integrand, 0.0, mid, points=[t for t in protocol.switch_times if t < mid],
        epsabs=1e-13, limit=200,
    )
    assert lewis_phase(traj, mid) == pytest.approx(expected_mid, abs=1e-10)


# --- invariant ------------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(0, 0.5), (1, 1.5), (3, 3.5)])
def test_invariant_eigenvalues(n, expected):
    grid = SpatialGrid(2048, 40.0)
    b, bdot = 2.2, -0.7
    wf = mode_wavefunction(n, b, bdot, 0.4, grid)
    assert invariant_expectation(wf, b, bdot) == pytest.approx(expected, abs=1e-8)


def test_invariant_rejects_unnormalized():
    grid = SpatialGrid(1024, 20.0)
    wf = mode_wavefunction(0, 1.0, 0.0, 0.0, grid)
    wf.amplitudes = wf.amplitudes * 2.0
    with pytest.raises(ContractError):
        invariant_expectation(wf, 1.0, 0.0)
