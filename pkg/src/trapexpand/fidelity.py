"""Perturbative fidelity machinery for the quartic trap anharmonicity.

The anharmonic part of the truncated Gaussian trap couples dynamical modes
n and n' through the matrix element

    <psi_n| V1 |psi_n'> = -(u b^4 / 2 w~0^2) alpha_{n,n'}
                          e^{-i(n'-n) theta} / sqrt(pi 2^{n+n'} n! n'!),

with alpha the Gauss-weighted Hermite y^4 moment and theta the accumulated
1/b^2 phase.  First-order amplitudes, the second-order fidelity, the
approximate bound F_b and the time-averaged anharmonic energy all reduce
to quadratures over the trajectory.

Conventions: everything dimensionless (hbar = m = omega0 = 1), waists in
units of a0, energies in hbar*omega0.  F_b is an *approximate* bound (its
diagonal first-order term is really a phase) and is never reported as a
certified one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AmplitudeRangeError, DomainError
from .ermakov import lewis_phase
from .quadrature import gl_adaptive
from .trajectory import ScalingTrajectory

# n' - n values with nonzero alpha (y^4 connects Hermite indices by <= 4,
# even parity only)
SELECTION_OFFSETS = (-4, -2, 0, 2, 4)


@dataclass(frozen=True)
class FidelityReport:
    """Perturbative figures of merit for one protocol at one waist."""

    n: int
    w_tilde: float
    tau_f: float
    lambda_tilde: float
    F_b: float
    F_second_order: float
    V1_avg: float
    F_EL: float | None = None


def lambda_tilde(w_tilde: float, n: int = 0) -> float:
    """Anharmonic coupling scale (3/(4 w~0^2)) (n^2 + n + 1/2)."""
    if w_tilde <= 0.0:
        raise DomainError(f"w_tilde must be > 0, got {w_tilde!r}")
    return 0.75 * (n * n + n + 0.5) / (w_tilde * w_tilde)


def hermite_alpha(n: int, nprime: int) -> float:
    """Integral of e^{-y^2} H_n(y) H_n'(y) y^4.

    Zero unless |n - n'| is even and <= 4; otherwise evaluated by
    Gauss-Hermite quadrature with enough nodes to be exact for the
    polynomial integrand.
    """
    if n < 0 or nprime < 0:
        raise DomainError("quantum numbers must be >= 0")
    if (n - nprime) % 2 != 0 or abs(n - nprime) > 4:
        return 0.0
    nodes = math.ceil((n + nprime + 5) / 2)
    y, w = np.polynomial.hermite.hermgauss(nodes)
    hn = np.polynomial.hermite.hermval(y, [0.0] * n + [1.0])
    hnp = np.polynomial.hermite.hermval(y, [0.0] * nprime + [1.0])
    return float(math.fsum(w * hn * hnp * y**4))


def beta_integral(
    traj: ScalingTrajectory,
    u,
    n: int,
    nprime: int,
    tau: float,
) -> complex:
    """Integral of b^4 u e^{-i(n'-n) theta} from 0 to tau."""
    ufun = u.u if hasattr(u, "u") else u
    dn = nprime - n

    def integrand(t):
        phase = np.exp(-1j * dn * lewis_phase(traj, t)) if dn else 1.0
        return traj.b(t) ** 4 * ufun(t) * phase

    return complex(
        gl_adaptive(integrand, 0.0, tau, breakpoints=traj.breakpoints, tol=1e-10)
    )


def first_order_amplitude(
    traj: ScalingTrajectory,
    u,
    n: int,
    nprime: int,
    w_tilde: float,
    tau_f: float,
) -> complex:
    """First-order transition amplitude n <- n' of the anharmonic coupling.

    f = i alpha_{n,n'} beta_{n,n'}(tau_f) / (2 w~0^2 sqrt(pi 2^{n+n'} n! n'!)).
    """
    if w_tilde <= 0.0:
        raise DomainError(f"w_tilde must be > 0, got {w_tilde!r}")
    if n + nprime > 60:
        raise AmplitudeRangeError(
            f"n + n' = {n + nprime} > 60: factorial prefactor would overflow"
        )
    alpha = hermite_alpha(n, nprime)
    if alpha == 0.0:
        return 0.0 + 0.0j
    beta = beta_integral(traj, u, n, nprime, tau_f)
    log_pref = 0.5 * (
        math.log(math.pi)
        + (n + nprime) * math.log(2.0)
        + math.lgamma(n + 1)
        + math.lgamma(nprime + 1)
    )
    return 1j * alpha * beta * math.exp(-log_pref) / (2.0 * w_tilde**2)


def fidelity_second_order(
    traj: ScalingTrajectory,
    u,
    n: int,
    w_tilde: float,
    tau_f: float,
) -> float:
    """F = sqrt(1 - sum_{n' != n} |f^(1)|^2) over the selection-rule set."""
    total = 0.0
    for dn in SELECTION_OFFSETS:
        nprime = n + dn
        if dn == 0 or nprime < 0:
            continue
        total += abs(first_order_amplitude(traj, u, n, nprime, w_tilde, tau_f)) ** 2
    if total > 1.0:
        warnings.warn(
            f"first-order transition weight {total:.3g} exceeds 1: "
            "perturbation theory has broken down",
            stacklevel=2,
        )
        return 0.0
    return math.sqrt(1.0 - total)


def kinetic_moment(traj: ScalingTrajectory) -> float:
    """Integral of bdot^2 b^2 over [0, tau_f]."""

    def integrand(t):
        return traj.bdot(t) ** 2 * traj.b(t) ** 2

    return float(
        gl_adaptive(
            integrand, 0.0, traj.tau_f, breakpoints=traj.breakpoints, tol=1e-12
        ).real
    )


def fidelity_bound(
    traj: ScalingTrajectory,
    w_tilde: float,
    n: int = 0,
    tau_f: float | None = None,
) -> float:
    """Approximate bound F_b = 1 - lam tau_f - 3 lam * integral(bdot^2 b^2)."""
    lam = lambda_tilde(w_tilde, n)
    if tau_f is None:
        tau_f = traj.tau_f
    return 1.0 - lam * tau_f - 3.0 * lam * kinetic_moment(traj)


def f_el_bound(tau_f: float, gamma: float, w_tilde: float) -> float:
    """Closed-form bound of the unconstrained protocol (ground state):

    1 - (3/(8 w~0^2)) [tau_f + 3 (gamma^2 - 1)^2/(4 tau_f)].
    """
    if tau_f <= 0.0 or gamma <= 0.0 or w_tilde <= 0.0:
        raise DomainError("tau_f, gamma, w_tilde must all be > 0")
    g2 = gamma * gamma
    return 1.0 - 3.0 / (8.0 * w_tilde**2) * (
        tau_f + 3.0 * (g2 - 1.0) ** 2 / (4.0 * tau_f)
    )


def avg_perturbation_energy(
    traj: ScalingTrajectory,
    u=None,
    w_tilde: float = 1.0,
    n: int = 0,
    tau_f: float | None = None,
) -> float:
    """Time-averaged anharmonic energy magnitude, in hbar*omega0.

    Evaluated through the same kinetic moment as F_b, so the identity
    F_b = 1 - V1_avg * tau_f holds exactly for every trajectory.  Static
    trap: V1_avg = lambda_tilde.
    """
    lam = lambda_tilde(w_tilde, n)
    if tau_f is None:
        tau_f = traj.tau_f
    if tau_f == 0.0:  # zero-length protocol: static trap
        return lam
    return lam * (1.0 + 3.0 * kinetic_moment(traj) / tau_f)


def report(
    traj: ScalingTrajectory,
    u,
    w_tilde: float,
    n: int = 0,
    gamma: float | None = None,
    unconstrained: bool = False,
) -> FidelityReport:
    """Bundle the perturbative figures for one protocol."""
    tau_f = traj.tau_f
    lam = lambda_tilde(w_tilde, n)
    fb = fidelity_bound(traj, w_tilde, n)
    f2 = fidelity_second_order(traj, u, n, w_tilde, tau_f)
    v1 = avg_perturbation_energy(traj, u, w_tilde, n)
    fel = None
    if unconstrained:
        fel = f_el_bound(tau_f, gamma if gamma is not None else traj.gamma, w_tilde)
    return FidelityReport(
        n=n,
        w_tilde=w_tilde,
        tau_f=tau_f,
        lambda_tilde=lam,
        F_b=fb,
        F_second_order=f2,
        V1_avg=v1,
        F_EL=fel,
    )
