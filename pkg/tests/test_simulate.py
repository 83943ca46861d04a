import math

import numpy as np
import pytest

from trapexpand import (
    ContractError,
    DomainError,
    GridError,
    LeakError,
    SimConfig,
    SpatialGrid,
    WaveFunction,
    bangbang_protocol,
    bsb_protocol,
    convergence_check,
    default_grid,
    evolve,
    invariant_expectation,
    lewis_phase,
    mode_wavefunction,
    overlap_fidelity,
    polynomial_protocol,
    potential_values,
    stationary_state,
)


# --- grids ------------------------------------------------------------------------


def test_grid_invariants():
    grid = SpatialGrid(1024, 20.0)
    assert grid.dx * grid.n_points == pytest.approx(2 * grid.half_width, rel=1e-15)
    assert grid.x[0] == -20.0
    assert 0.0 in grid.x
    with pytest.raises(GridError):
        SpatialGrid(1000, 20.0)  # not a power of two
    with pytest.raises(GridError):
        SpatialGrid(128, 20.0)  # too few points
    with pytest.raises(GridError):
        SpatialGrid(1024, -1.0)


def test_simconfig_validation():
    grid = SpatialGrid(1024, 20.0)
    with pytest.raises(DomainError):
        SimConfig("cubic", 1e-3, grid, 1e-4)
    with pytest.raises(DomainError):
        SimConfig("harmonic", -1e-3, grid, 1e-4)
    with pytest.raises(DomainError):
        SimConfig("harmonic", 1e-3, grid, 1e-2)  # leak threshold too lax


def test_default_grid_stays_inside_quartic_turnover():
    grid = default_grid(10.0, 98.34)
    assert grid.half_width == pytest.approx(0.69 * 98.34)
    assert grid.half_width < 98.34 / math.sqrt(2.0)
    wide = default_grid(5.0, 1000.0)
    assert wide.half_width == pytest.approx(40.0)


# --- potentials --------------------------------------------------------------------


@pytest.mark.parametrize("model", ["harmonic", "quartic", "gaussian"])
def test_potential_vanishes_at_origin(model):
    grid = SpatialGrid(1024, 20.0)
    v = potential_values(grid, 0.7, 30.0, model)
    assert v[np.argmin(np.abs(grid.x))] == pytest.approx(0.0, abs=1e-30)


def test_quartic_turnover_maximum():
    w, u = 30.0, 0.8
    grid = SpatialGrid(4096, 40.0)
    v = potential_values(grid, u, w, "quartic")
    i = np.argmax(v[grid.x > 0])
    x_max = grid.x[grid.x > 0][i]
    assert x_max == pytest.approx(w / math.sqrt(2.0), abs=2 * grid.dx)
    assert np.max(v) == pytest.approx(u * w * w / 8.0, rel=1e-3)


def test_gaussian_matches_quartic_at_small_x():
    w = 50.0
    grid = SpatialGrid(4096, 0.12 * w)
    vq = potential_values(grid, 1.0, w, "quartic")
    vg = potential_values(grid, 1.0, w, "gaussian")
    sel = np.abs(np.abs(grid.x) - 0.1 * w) < grid.dx
    assert np.all(np.abs(vg[sel] - vq[sel]) < 0.01 * np.abs(vg[sel]))


def test_negative_u_permitted():
    grid = SpatialGrid(1024, 20.0)
    v = potential_values(grid, -1.0, 30.0, "harmonic")
    assert np.all(v <= 0.0)


# --- stationary states --------------------------------------------------------------


def test_stationary_ground_state_width():
    grid = SpatialGrid(1024, 20.0)
    wf = stationary_state(grid, 1.0, 0)
    x2 = np.sum(np.abs(wf.amplitudes) ** 2 * grid.x**2) * grid.dx
    assert x2 == pytest.approx(0.5, rel=1e-12)


def test_stationary_target_state_width():
    gamma = 10.0
    grid = SpatialGrid(2048, 80.0)
    wf = stationary_state(grid, gamma**-2, 0)
    x2 = np.sum(np.abs(wf.amplitudes) ** 2 * grid.x**2) * grid.dx
    assert x2 == pytest.approx(gamma**2 / 2.0, rel=1e-12)


def test_stationary_energy_n2():
    grid = SpatialGrid(2048, 20.0)
    wf = stationary_state(grid, 1.0, 2)
    psi = wf.amplitudes
    k = grid.k
    kin = float(np.real(np.vdot(psi, np.fft.ifft(0.5 * k**2 * np.fft.fft(psi)))) * grid.dx)
    pot = float(np.sum(0.5 * grid.x**2 * np.abs(psi) ** 2) * grid.dx)
    assert kin + pot == pytest.approx(2.5, abs=1e-8)


# --- overlaps ------------------------------------------------------------------------


def test_overlap_trivials():
    grid = SpatialGrid(1024, 20.0)
    g0 = stationary_state(grid, 1.0, 0)
    g2 = stationary_state(grid, 1.0, 2)
    assert overlap_fidelity(g0, g0) == pytest.approx(1.0, abs=1e-12)
    assert overlap_fidelity(g0, g2) < 1e-10
    sup = WaveFunction((g0.amplitudes + g2.amplitudes) / math.sqrt(2.0), grid)
    assert overlap_fidelity(sup, g0) == pytest.approx(1 / math.sqrt(2.0), rel=1e-10)


def test_overlap_grid_mismatch():
    a = stationary_state(SpatialGrid(1024, 20.0), 1.0, 0)
    b = stationary_state(SpatialGrid(512, 20.0), 1.0, 0)
    with pytest.raises(ContractError):
        overlap_fidelity(a, b)


# --- evolution ------------------------------------------------------------------------


def _static_protocol(tau_f):
    from trapexpand import Protocol, ProtocolSegment

    seg = ProtocolSegment("analytic", 0.0, tau_f, lambda t: np.ones(np.shape(t)))
    return Protocol("polynomial", (seg,), 1.0, None, tau_f)


def test_static_evolution_is_stationary():
    grid = SpatialGrid(1024, 20.0)
    cfg = SimConfig("harmonic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    final, diag = evolve(psi0, _static_protocol(10.0), cfg)
    assert overlap_fidelity(final, psi0) == pytest.approx(1.0, abs=1e-8)
    assert diag.norm_drift < 1e-10


def test_harmonic_transitionless_polynomial():
    gamma = 10.0
    protocol, _ = polynomial_protocol(7.854, gamma)
    grid = SpatialGrid(2048, 80.0)
    cfg = SimConfig("harmonic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    target = stationary_state(grid, gamma**-2, 0)
    final, diag = evolve(psi0, protocol, cfg)
    assert overlap_fidelity(final, target) >= 0.9999
    assert diag.norm_drift < 1e-10


def test_invariant_conserved_along_harmonic_evolution():
    gamma = 10.0
    protocol, traj = polynomial_protocol(7.854, gamma)
    grid = SpatialGrid(2048, 80.0)
    cfg = SimConfig("harmonic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    _, diag = evolve(psi0, protocol, cfg, snapshot_stride=3000)
    assert len(diag.snapshots) >= 4
    for tau, amps in diag.snapshots:
        wf = WaveFunction(amps, grid)
        val = invariant_expectation(wf, traj.b(tau), traj.bdot(tau))
        assert val == pytest.approx(0.5, abs=1e-5)


def test_dynamical_mode_solves_harmonic_tdse():
    # pins the chirp and phase sign conventions: the complex overlap with the
    # phase-carrying mode must stay at 1, not just its magnitude
    gamma = 4.0
    protocol, traj = polynomial_protocol(6.0, gamma)
    grid = SpatialGrid(1024, 32.0)
    cfg = SimConfig("harmonic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    final, diag = evolve(psi0, protocol, cfg, snapshot_stride=4000)
    for tau, amps in [*diag.snapshots, (6.0, final.amplitudes)]:
        mode = mode_wavefunction(0, traj.b(tau), traj.bdot(tau), lewis_phase(traj, tau), grid)
        ov = complex(np.sum(np.conj(mode.amplitudes) * amps) * grid.dx)
        assert ov.real == pytest.approx(1.0, abs=1e-6)
        assert abs(ov.imag) < 1e-4


def test_parity_preserved():
    protocol, _ = bsb_protocol(5.0, 10.0, 1.0)
    w = 98.34
    grid = default_grid(10.0, w)
    cfg = SimConfig("quartic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    final, _ = evolve(psi0, protocol, cfg, w)
    x_mean = abs(np.sum(grid.x * np.abs(final.amplitudes) ** 2) * grid.dx)
    assert x_mean < 1e-8


def test_leak_error_on_undersized_grid():
    protocol, _ = bangbang_protocol(10.0, 1.0)
    grid = SpatialGrid(512, 8.0)  # cannot contain the gamma = 10 expansion
    cfg = SimConfig("harmonic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    with pytest.raises(LeakError) as err:
        evolve(psi0, protocol, cfg)
    assert 0.0 < err.value.tau <= protocol.tau_f


def test_convergence_check_static_case():
    grid = SpatialGrid(512, 20.0)
    cfg = SimConfig("harmonic", 1e-3, grid, 1e-4)
    report = convergence_check(_static_protocol(2.0), cfg)
    assert report.converged
    assert report.delta_dt < 1e-10
    assert report.delta_grid < 1e-10


def test_convergence_check_documents_bangbang_resolution():
    # Richardson-style self-check: the bang-bang run at the default step is
    # already converged below 1e-6 in both dt and grid
    protocol, _ = bangbang_protocol(10.0, 1.0)
    grid = SpatialGrid(2048, 80.0)
    cfg = SimConfig("harmonic", 5e-4, grid, 1e-4)
    report = convergence_check(protocol, cfg)
    assert report.converged, (report.delta_dt, report.delta_grid)
    assert report.fidelity > 0.9999  # harmonic transitionless


def test_gaussian_and_quartic_agree_at_weak_anharmonicity():
    gamma, w = 2.0, 200.0
    protocol, _ = polynomial_protocol(4.0, gamma)
    grid = SpatialGrid(1024, 16.0)
    psi0 = stationary_state(grid, 1.0, 0)
    target = stationary_state(grid, gamma**-2, 0)
    fids = {}
    for model in ("quartic", "gaussian"):
        cfg = SimConfig(model, 5e-4, grid, 1e-4)
        final, _ = evolve(psi0, protocol, cfg, w)
        fids[model] = overlap_fidelity(final, target)
    assert abs(fids["quartic"] - fids["gaussian"]) < 1e-4


def test_simulated_fidelity_above_bound_paper_parameters(si_trap):
    from trapexpand import fidelity_bound, to_dimensionless

    gamma, w_tilde, _ = to_dimensionless(si_trap)
    protocol, traj = bsb_protocol(5.0, gamma, 1.0)
    grid = default_grid(gamma, w_tilde)
    cfg = SimConfig("quartic", 5e-4, grid, 1e-4)
    psi0 = stationary_state(grid, 1.0, 0)
    target = stationary_state(grid, gamma**-2, 0)
    final, _ = evolve(psi0, protocol, cfg, w_tilde)
    f_exact = overlap_fidelity(final, target)
    assert f_exact >= fidelity_bound(traj, w_tilde) - 1e-3
