"""Exact 1D time-dependent Schrodinger verification via split-operator stepping.

i dpsi/dtau = [-(1/2) d^2/dx^2 + V(x, tau)] psi   (dimensionless units)

Potential models (all vanish at x = 0, u may be negative on expulsive
segments):

    harmonic   (u/2) x^2
    quartic    (u/2) (x^2 - x^4/w~0^2)       truncated Gaussian
    gaussian   (u w~0^2/4) (1 - e^{-2 x^2/w~0^2})

Each step is a second-order Strang split: half potential phase, full
kinetic phase in momentum space, half potential phase, with the control
sampled at the panel midpoint and steps aligned to the protocol segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ermakov import mode_wavefunction
from .errors import DomainError, GridError, LeakError, UnitarityError
from .grid import SpatialGrid, WaveFunction, overlap_fidelity

POTENTIAL_MODELS = ("harmonic", "quartic", "gaussian")


@dataclass(frozen=True)
class SimConfig:
    potential_model: str = "quartic"
    dt: float = 5e-4
    grid: SpatialGrid = field(default_factory=lambda: SpatialGrid(4096, 80.0))
    leak_threshold: float = 1e-4

    def __post_init__(self):
        if self.potential_model not in POTENTIAL_MODELS:
            raise DomainError(
                f"potential_model must be one of {POTENTIAL_MODELS}, "
                f"got {self.potential_model!r}"
            )
        if not self.dt > 0.0:
            raise DomainError(f"dt must be > 0, got {self.dt!r}")
        if not 0.0 < self.leak_threshold <= 1e-3:
            raise DomainError(
                f"leak_threshold must be in (0, 1e-3], got {self.leak_threshold!r}"
            )


def default_grid(gamma: float, w_tilde: float | None) -> SpatialGrid:
    """Grid containing the gamma-wide target state but staying inside the
    quartic turnover at x = w~0/sqrt(2), where the truncated potential
    becomes expulsive."""
    half_width = 8.0 * max(gamma, 1.0)
    if w_tilde is not None:
        half_width = min(half_width, 0.69 * w_tilde)
    return SpatialGrid(4096, half_width)


def potential_profile(grid: SpatialGrid, w_tilde: float | None, model: str) -> np.ndarray:
    """Spatial profile P(x) with V(x, tau) = u(tau) * P(x)."""
    x = grid.x
    if model == "harmonic":
        return 0.5 * x * x
    if w_tilde is None or w_tilde <= 0.0:
        raise DomainError(f"{model} potential needs w_tilde > 0, got {w_tilde!r}")
    if model == "quartic":
        return 0.5 * (x * x - x**4 / (w_tilde * w_tilde))
    if model == "gaussian":
        w2 = w_tilde * w_tilde
        return 0.25 * w2 * (1.0 - np.exp(-2.0 * x * x / w2))
    raise DomainError(f"unknown potential model {model!r}")


def potential_values(grid: SpatialGrid, u: float, w_tilde: float | None, model: str) -> np.ndarray:
    """Potential samples at control value u."""
    return u * potential_profile(grid, w_tilde, model)


def stationary_state(grid: SpatialGrid, omega_ratio: float, n: int = 0) -> WaveFunction:
    """Harmonic eigenstate of frequency ratio omega/omega0 on the grid."""
    if omega_ratio <= 0.0:
        raise DomainError(f"omega_ratio must be > 0, got {omega_ratio!r}")
    # psi_n ~ H_n(sqrt(r) x) e^{-r x^2/2}: a static mode of width 1/sqrt(r)
    return mode_wavefunction(n, 1.0 / math.sqrt(omega_ratio), 0.0, 0.0, grid)


@dataclass
class EvolveDiagnostics:
    norm_drift: float
    edge_leak_max: float
    max_abs_u: float
    n_steps: int
    dt_max: float
    snapshots: list = field(default_factory=list)


def evolve(
    psi0: WaveFunction,
    protocol,
    cfg: SimConfig,
    w_tilde: float | None = None,
    snapshot_stride: int | None = None,
) -> tuple[WaveFunction, EvolveDiagnostics]:
    """Propagate psi0 through the protocol; returns final state + diagnostics.

    Raises LeakError when the probability in the outer 4% of the grid
    exceeds cfg.leak_threshold, and UnitarityError on norm drift > 1e-8.
    """
    grid = psi0.grid
    if grid != cfg.grid:
        raise GridError("psi0 grid differs from cfg.grid")
    profile = potential_profile(grid, w_tilde, cfg.potential_model)
    k2 = grid.k**2
    dx = grid.dx
    edge = int(round(0.02 * grid.n_points))  # outer 2% per side
    norm0 = psi0.norm()

    psi = psi0.amplitudes.astype(complex).copy()
    leak_max = 0.0
    umax = 0.0
    n_steps = 0
    dt_used = 0.0
    snapshots = []
    kinetic_cache: dict[float, np.ndarray] = {}

    if snapshot_stride:
        snapshots.append((0.0, psi.copy()))

    for seg in protocol.segments:
        length = seg.tau_end - seg.tau_start
        if length <= 0.0:
            continue
        n = max(1, math.ceil(length / cfg.dt))
        h = length / n
        dt_used = max(dt_used, h)
        kin = kinetic_cache.get(h)
        if kin is None:
            kin = np.exp(-0.5j * h * k2)
            kinetic_cache[h] = kin
        mids = seg.tau_start + h * (np.arange(n) + 0.5)
        u_mid = np.asarray(seg.u(mids), dtype=float)
        umax = max(umax, float(np.max(np.abs(u_mid))))
        for i in range(n):
            half_phase = np.exp(-0.5j * h * u_mid[i] * profile)
            psi *= half_phase
            psi = np.fft.ifft(kin * np.fft.fft(psi))
            psi *= half_phase
            n_steps += 1
            leak = float(
                (np.sum(np.abs(psi[:edge]) ** 2) + np.sum(np.abs(psi[-edge:]) ** 2))
                * dx
            )
            if leak > leak_max:
                leak_max = leak
            if leak > cfg.leak_threshold:
                raise LeakError(mids[i] + 0.5 * h, leak, cfg.leak_threshold)
            if snapshot_stride and n_steps % snapshot_stride == 0:
                snapshots.append((mids[i] + 0.5 * h, psi.copy()))

    out = WaveFunction(psi, grid)
    drift = abs(out.norm() - norm0)
    if drift > 1e-8:
        raise UnitarityError(drift)
    return out, EvolveDiagnostics(
        norm_drift=drift,
        edge_leak_max=leak_max,
        max_abs_u=umax,
        n_steps=n_steps,
        dt_max=dt_used,
        snapshots=snapshots,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    fidelity: float
    fidelity_half_dt: float
    fidelity_double_grid: float
    delta_dt: float
    delta_grid: float
    converged: bool


def _target_fidelity(protocol, cfg: SimConfig, w_tilde, n: int) -> float:
    psi0 = stationary_state(cfg.grid, 1.0, n)
    target = stationary_state(cfg.grid, protocol.gamma**-2, n)
    final, _ = evolve(psi0, protocol, cfg, w_tilde)
    return overlap_fidelity(final, target)


def convergence_check(
    protocol,
    cfg: SimConfig,
    w_tilde: float | None = None,
    n: int = 0,
    tol: float = 1e-6,
) -> ConvergenceReport:
    """Re-run at dt/2 and at doubled grid resolution; compare fidelities.

    The initial/target eigenstates of quantum number n are re-prepared on
    each grid, matching the |<psi_n(tau_f)|Psi(tau_f)>| definition.
    """
    base = _target_fidelity(protocol, cfg, w_tilde, n)
    cfg_dt = SimConfig(cfg.potential_model, cfg.dt / 2.0, cfg.grid, cfg.leak_threshold)
    f_dt = _target_fidelity(protocol, cfg_dt, w_tilde, n)
    fine_grid = SpatialGrid(cfg.grid.n_points * 2, cfg.grid.half_width)
    cfg_grid = SimConfig(cfg.potential_model, cfg.dt, fine_grid, cfg.leak_threshold)
    f_grid = _target_fidelity(protocol, cfg_grid, w_tilde, n)
    d_dt = abs(base - f_dt)
    d_grid = abs(base - f_grid)
    return ConvergenceReport(
        fidelity=base,
        fidelity_half_dt=f_dt,
        fidelity_double_grid=f_grid,
        delta_dt=d_dt,
        delta_grid=d_grid,
        converged=bool(max(d_dt, d_grid) <= tol),
    )
