"""Scaling-equation integration, residuals, dynamical modes and phases.

The scaling factor obeys b'' + u(tau) b = 1/b^3 in dimensionless units,
equivalently the first-order system x1' = x2, x2' = -u x1 + 1/x1^3 with
x1 = b, x2 = bdot.  The dynamical modes of the driven oscillator are
Hermite-Gaussians of width b, chirped by bdot/b, carrying the accumulated
phase integral of 1/b^2.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractError,
    DivergenceError,
    DomainError,
    GridError,
    SingularTrajectoryError,
)
from .grid import SpatialGrid, WaveFunction
from .trajectory import DenseSegment, ScalingTrajectory


@dataclass(frozen=True)
class OCTState:
    """State of the scaling system: x1 = b (> 0), x2 = bdot."""

    x1: float
    x2: float

    def __post_init__(self):
        if not self.x1 > 0.0:
            raise DomainError(f"x1 must be > 0, got {self.x1!r}")


def u_from_b(b, bddot):
    """Invert the scaling equation: u = 1/b^4 - bddot/b."""
    ba = np.asarray(b, dtype=float)
    if np.any(ba <= 0.0):
        raise DomainError(f"b must be > 0, got {b!r}")
    out = 1.0 / ba**4 - np.asarray(bddot, dtype=float) / ba
    return float(out) if np.ndim(b) == 0 and np.ndim(bddot) == 0 else out


def _control_pieces(u, tau_f: float, breakpoints):
    """Normalize a control (callable or Protocol) to [(a, b, f), ...] pieces."""
    segments = getattr(u, "segments", None)
    if segments is not None:
        return [(s.tau_start, s.tau_end, s.u) for s in segments]
    cuts = sorted(t for t in breakpoints if 0.0 < t < tau_f)
    edges = [0.0, *cuts, tau_f]

    def scalarized(t):
        return u(t)

    return [(a, b, scalarized) for a, b in zip(edges[:-1], edges[1:])]


def integrate_ermakov(
    u,
    x0: OCTState,
    tau_f: float,
    step: float | None = None,
    breakpoints=(),
) -> ScalingTrajectory:
    """Integrate the scaling system with a classical 4th-order one-step method.

    `u` is a callable of tau or a Protocol; steps are aligned to the control
    segments so a discontinuity is never straddled.  The default step is
    tau_f / 2e4.
    """
    if tau_f <= 0.0:
        raise DomainError(f"tau_f must be > 0, got {tau_f!r}")
    if step is None:
        step = tau_f / 2.0e4
    if step <= 0.0:
        raise DomainError(f"step must be > 0, got {step!r}")

    dense_segments = []
    x1, x2 = x0.x1, x0.x2
    for a, b, useg in _control_pieces(u, tau_f, breakpoints):
        if b <= a:
            continue
        n = max(8, math.ceil((b - a) / step))
        h = (b - a) / n
        nodes = a + h * np.arange(n + 1)
        u_node = np.asarray(useg(nodes), dtype=float)
        u_mid = np.asarray(useg(nodes[:-1] + 0.5 * h), dtype=float)
        taus = np.empty(n + 1)
        xs1 = np.empty(n + 1)
        xs2 = np.empty(n + 1)
        taus[0], xs1[0], xs2[0] = a, x1, x2
        for i in range(n):
            t = nodes[i]
            ua, um, ub = u_node[i], u_mid[i], u_node[i + 1]
            k1a = x2
            k1b = -ua * x1 + 1.0 / x1**3
            y1 = x1 + 0.5 * h * k1a
            y2 = x2 + 0.5 * h * k1b
            if y1 <= 0.0:
                raise SingularTrajectoryError(t)
            k2a = y2
            k2b = -um * y1 + 1.0 / y1**3
            y1 = x1 + 0.5 * h * k2a
            y2 = x2 + 0.5 * h * k2b
            if y1 <= 0.0:
                raise SingularTrajectoryError(t)
            k3a = y2
            k3b = -um * y1 + 1.0 / y1**3
            y1 = x1 + h * k3a
            y2 = x2 + h * k3b
            if y1 <= 0.0:
                raise SingularTrajectoryError(t)
            k4a = y2
            k4b = -ub * y1 + 1.0 / y1**3
            x1 = x1 + h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
            x2 = x2 + h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
            if not (math.isfinite(x1) and math.isfinite(x2)):
                raise DivergenceError(t + h)
            if x1 <= 0.0:
                raise SingularTrajectoryError(t + h)
            taus[i + 1], xs1[i + 1], xs2[i + 1] = t + h, x1, x2
        taus[-1] = b  # kill accumulated roundoff at the segment edge
        dense_segments.append(DenseSegment(taus, xs1, xs2))

    gamma_target = getattr(u, "gamma", None)
    if gamma_target is None:
        gamma_target = x1
    return ScalingTrajectory(
        dense_segments,
        gamma=gamma_target,
        bddot_bc_ok=False,
    )


def ermakov_residual(traj: ScalingTrajectory, u, n_grid: int = 10_000) -> float:
    """Max |b'' + u b - 1/b^3| over a uniform grid.

    Points within one grid step of an interior breakpoint are excluded (the
    control may jump there).  Returns inf if evaluation fails.
    """
    try:
        t = np.linspace(0.0, traj.tau_f, n_grid)
        h = t[1] - t[0]
        keep = np.ones(n_grid, dtype=bool)
        for bp in traj.breakpoints:
            keep &= np.abs(t - bp) > h
        t = t[keep]
        ufun = u.u if hasattr(u, "u") else u
        res = traj.bddot(t) + ufun(t) * traj.b(t) - 1.0 / traj.b(t) ** 3
        value = float(np.max(np.abs(res)))
        return value if math.isfinite(value) else math.inf
    except Exception:
        return math.inf


def lewis_phase(traj: ScalingTrajectory, tau) -> float | np.ndarray:
    """Accumulated phase integral of 1/b^2 from 0 to tau.

    The cumulative integral is cached on the trajectory at first use
    (panel edges + per-panel Gauss rule), so repeated calls are cheap.
    """
    accum = getattr(traj, "_phase_accum", None)
    if accum is None:
        accum = _PhaseAccumulator(traj)
        traj._phase_accum = accum
    return accum(tau)


class _PhaseAccumulator:
    _PANELS_PER_SEGMENT = 256
    _NODES = 16

    def __init__(self, traj: ScalingTrajectory):
        edges = [0.0]
        for seg in traj.segments:
            if seg.tau_end > seg.tau_start:
                edges.extend(
                    np.linspace(seg.tau_start, seg.tau_end, self._PANELS_PER_SEGMENT + 1)[1:]
                )
        self._edges = np.asarray(edges)
        self._traj = traj
        xi, wi = np.polynomial.legendre.leggauss(self._NODES)
        self._xi, self._wi = xi, wi
        lo = self._edges[:-1]
        hi = self._edges[1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[:, None] + half[:, None] * xi[None, :]
        f = self._integrand(x.ravel()).reshape(x.shape)
        panel_vals = (f @ wi) * half
        self._cum = np.concatenate([[0.0], np.cumsum(panel_vals)])

    def _integrand(self, t):
        return 1.0 / self._traj.b(t) ** 2

    def __call__(self, tau):
        t = np.asarray(tau, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        idx = np.clip(np.searchsorted(self._edges, t, side="right") - 1, 0, len(self._edges) - 2)
        lo = self._edges[idx]
        half = 0.5 * (t - lo)
        mid = lo + half
        x = mid[:, None] + half[:, None] * self._xi[None, :]
        f = self._integrand(x.ravel()).reshape(x.shape)
        partial = (f @ self._wi) * half
        out = self._cum[idx] + partial
        return float(out[0]) if scalar else out


def mode_wavefunction(
    n: int,
    b: float,
    bdot: float,
    phase: float,
    grid: SpatialGrid,
) -> WaveFunction:
    """Dynamical mode of the driven harmonic trap on a grid.

    psi_n = (2^n n! b)^(-1/2) pi^(-1/4) e^{-i(n+1/2) phase}
            exp[(i/2)(bdot/b + i/b^2) x^2] H_n(x/b).
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if b <= 0.0:
        raise DomainError(f"b must be > 0, got {b!r}")
    # >= 16 samples per oscillation of the mode structure ...
    k_mode = math.sqrt(2.0 * n + 1.0) / b
    if grid.dx > math.pi / (8.0 * k_mode):
        raise GridError(
            f"grid dx={grid.dx:.4g} cannot resolve mode n={n} of width "
            f"{b * math.sqrt(2 * n + 1):.4g}: need dx <= {math.pi / (8.0 * k_mode):.4g}"
        )
    # ... and the chirp must stay clear of Nyquist over the mode support
    support = min(grid.half_width, (math.sqrt(2.0 * n + 1.0) + 4.0) * b)
    k_alias = k_mode + abs(bdot) * support / b
    if k_alias > 0.8 * math.pi / grid.dx:
        raise GridError(
            f"chirp bdot={bdot!r} aliases on this grid (local wavenumber "
            f"{k_alias:.4g} vs Nyquist {math.pi / grid.dx:.4g})"
        )
    x = grid.x
    herm = np.polynomial.hermite.hermval(x / b, [0.0] * n + [1.0])
    log_norm = -0.5 * (n * math.log(2.0) + math.lgamma(n + 1) + math.log(b)) \
        - 0.25 * math.log(math.pi)
    psi = (
        math.exp(log_norm)
        * herm
        * np.exp(0.5j * (bdot / b) * x**2 - x**2 / (2.0 * b * b))
        * np.exp(-1j * (n + 0.5) * phase)
    )
    wf = WaveFunction(psi.astype(complex), grid)
    nrm = wf.norm()
    if abs(nrm - 1.0) > 1e-6:
        raise GridError(f"mode n={n} not normalizable on this grid (norm={nrm!r})")
    wf.amplitudes /= nrm
    return wf


def invariant_expectation(psi: WaveFunction, b: float, bdot: float) -> float:
    """Expectation of (x^2/b^2 + (b p - bdot x)^2)/2, p spectral.

    Equals n + 1/2 on the n-th dynamical mode and is conserved along any
    purely harmonic evolution.
    """
    if not psi.normalized():
        raise ContractError(f"psi is not normalized (norm={psi.norm()!r})")
    x = psi.grid.x
    dx = psi.grid.dx
    amp = psi.amplitudes
    x2 = float(np.sum(np.abs(amp) ** 2 * x * x) * dx)
    p_psi = np.fft.ifft(psi.grid.k * np.fft.fft(amp))  # p = -i d/dx
    phi = b * p_psi - bdot * x * amp
    pi2 = float(np.sum(np.abs(phi) ** 2) * dx)
    return 0.5 * (x2 / (b * b) + pi2)
