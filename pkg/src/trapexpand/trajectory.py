"""Scaling-factor trajectories b(tau).

A trajectory is a piecewise description of b, bdot, bddot on [0, tau_f],
either as closed-form segment evaluators or as dense integrator samples.
Trajectories are immutable after construction; evaluation is reentrant.

Boundary conditions: b(0)=1, bdot(0)=0, b(tau_f)=gamma, bdot(tau_f)=0.
Bang-type protocols violate the bddot endpoint conditions by construction
(the control jumps at tau=0+ and tau_f-), and the unconstrained family
violates the bdot ones as well, so each trajectory carries flags saying
which endpoint conditions its family claims.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline, make_interp_spline

from .errors import DomainError


def piecewise_eval(edges: np.ndarray, tau_f: float, funcs, tau):
    """Evaluate a piecewise function given interior edges and per-piece callables.

    Accepts scalar or ndarray tau in [0, tau_f] (tiny overshoot clipped);
    at an interior edge the right-hand piece wins.
    """
    t = np.asarray(tau, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    tol = 1e-9 * max(1.0, tau_f)
    if np.any(t < -tol) or np.any(t > tau_f + tol):
        raise DomainError(
            f"tau outside [0, {tau_f!r}]: range [{t.min()!r}, {t.max()!r}]"
        )
    tc = np.clip(t, 0.0, tau_f)
    idx = np.searchsorted(edges, tc, side="right")
    out = np.empty_like(tc)
    for i, func in enumerate(funcs):
        mask = idx == i
        if np.any(mask):
            out[mask] = func(tc[mask])
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class ClosedFormSegment:
    """One analytic piece of a trajectory; evaluators take/return ndarrays."""

    tau_start: float
    tau_end: float
    b: Callable[[np.ndarray], np.ndarray]
    bdot: Callable[[np.ndarray], np.ndarray]
    bddot: Callable[[np.ndarray], np.ndarray]


class DenseSegment:
    """Integrator samples (tau_i, x1_i, x2_i) on one control segment.

    b interpolates x1 with its exact derivative x2 (cubic Hermite); bdot is
    a cubic spline through the x2 samples and bddot its derivative, so the
    curvature is reconstructed from the samples alone, independently of the
    control that produced them.
    """

    def __init__(self, tau: np.ndarray, x1: np.ndarray, x2: np.ndarray):
        self.tau_start = float(tau[0])
        self.tau_end = float(tau[-1])
        self._tau = tau
        self._x1 = x1
        self._x2 = x2
        self._b_spline = CubicHermiteSpline(tau, x1, x2)
        # quintic for x2: its derivative is what bddot reads off, and a cubic
        # loses an order right at the segment edges where the curvature peaks
        k = 5 if len(tau) > 5 else 3
        self._bdot_spline = make_interp_spline(tau, x2, k=k)
        self._bddot_spline = self._bdot_spline.derivative()

    def b(self, t):
        return self._b_spline(t)

    def bdot(self, t):
        return self._bdot_spline(t)

    def bddot(self, t):
        return self._bddot_spline(t)


class ScalingTrajectory:
    """Piecewise b(tau) with vectorized evaluation.

    segments must tile [0, tau_f] contiguously.  `breakpoints` are the
    interior segment boundaries (where the driving control may jump).
    """

    def __init__(
        self,
        segments,
        gamma: float,
        bdot_bc_ok: bool = True,
        bddot_bc_ok: bool = True,
    ):
        if not segments:
            raise ValueError("trajectory needs at least one segment")
        self.segments = list(segments)
        self.gamma = float(gamma)
        self.tau_f = float(self.segments[-1].tau_end)
        self.bdot_bc_ok = bdot_bc_ok
        self.bddot_bc_ok = bddot_bc_ok
        self._edges = np.array([s.tau_end for s in self.segments[:-1]])

    @property
    def breakpoints(self) -> list[float]:
        return [float(e) for e in self._edges]

    @classmethod
    def constant(cls, value: float, tau_f: float) -> "ScalingTrajectory":
        """Static trajectory b == value (includes the tau_f = 0 degenerate case)."""
        val = float(value)
        seg = ClosedFormSegment(
            0.0,
            float(tau_f),
            b=lambda t: np.full_like(t, val),
            bdot=np.zeros_like,
            bddot=np.zeros_like,
        )
        return cls([seg], gamma=val)

    def _eval(self, tau, attr: str):
        funcs = [getattr(seg, attr) for seg in self.segments]
        return piecewise_eval(self._edges, self.tau_f, funcs, tau)

    def b(self, tau):
        return self._eval(tau, "b")

    def bdot(self, tau):
        return self._eval(tau, "bdot")

    def bddot(self, tau):
        return self._eval(tau, "bddot")

    def check_boundary_conditions(self, atol: float = 1e-9) -> list[str]:
        """Return human-readable violations of the claimed endpoint conditions."""
        bad = []
        if self.tau_f == 0.0:
            return bad
        checks = [("b(0)", self.b(0.0), 1.0), ("b(tau_f)", self.b(self.tau_f), self.gamma)]
        if self.bdot_bc_ok:
            checks += [
                ("bdot(0)", self.bdot(0.0), 0.0),
                ("bdot(tau_f)", self.bdot(self.tau_f), 0.0),
            ]
        if self.bddot_bc_ok:
            checks += [
                ("bddot(0)", self.bddot(0.0), 0.0),
                ("bddot(tau_f)", self.bddot(self.tau_f), 0.0),
            ]
        for name, got, want in checks:
            if abs(got - want) > atol:
                bad.append(f"{name} = {got!r}, expected {want!r}")
        return bad
