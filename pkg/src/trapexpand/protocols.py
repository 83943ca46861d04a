"""Synthesis of trap-expansion control protocols.

All four families produce a (Protocol, ScalingTrajectory) pair in
dimensionless units: u(tau) = omega^2(tau)/omega0^2 on [0, tau_f], with
u(0-) = 1 and u(tau_f+) = 1/gamma^4 as boundary metadata.

Families
--------
bang-bang            time-optimal two-step control u = -delta, +delta; its
                     duration tau_min is fixed by (gamma, delta).
bang-singular-bang   three-step control -delta, u_s(tau), +delta realizing
                     any duration above tau_min; on the singular arc
                     b^2 = 2*c1*tau + c2 and u_s = (1 + c1^2)/b^4.
unconstrained        delta -> infinity limit, b = sqrt((gamma^2-1)tau/tau_f + 1);
                     endpoint slope conditions are not met.
polynomial           quintic smoothstep b(s) meeting all six endpoint
                     conditions; u follows from the scaling equation and may
                     turn negative (expulsive) for short durations.

The squared scaling factor y = b^2 obeys y'' = -4*u*y + 2*E with
E = x2^2 + u*x1^2 + 1/x1^2 constant on each constant-u segment, which is
where the cosh/cos branch forms below come from.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BracketError,
    DomainError,
    InfeasibleDurationError,
    InfeasibleParametersError,
    UnsupportedDurationError,
)
from .trajectory import ClosedFormSegment, ScalingTrajectory, piecewise_eval
from .units import ControlBound

BANG_LOW = "bang-low"
BANG_HIGH = "bang-high"
SINGULAR = "singular"
ANALYTIC = "analytic"

FAMILIES = ("bang-bang", "bang-singular-bang", "unconstrained", "polynomial")

# c1 below (gamma^2-1)/(2e6) would put the singular arc past tau_f ~ 1e6,
# where tau2 underflows; such durations are rejected explicitly.
_TAU_F_CAP = 1.0e6


@dataclass(frozen=True)
class ProtocolSegment:
    kind: str
    tau_start: float
    tau_end: float
    u: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Protocol:
    """Piecewise control u(tau) on [0, tau_f]."""

    family: str
    segments: tuple[ProtocolSegment, ...]
    gamma: float
    delta: float | None  # None = unbounded family
    tau_f: float
    constants: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        tol = 1e-12 * max(1.0, self.tau_f)
        if abs(self.segments[0].tau_start) > tol:
            raise ValueError("first segment must start at tau = 0")
        if abs(self.segments[-1].tau_end - self.tau_f) > tol:
            raise ValueError("last segment must end at tau_f")
        for a, b in zip(self.segments[:-1], self.segments[1:]):
            if abs(a.tau_end - b.tau_start) > tol:
                raise ValueError(
                    f"segments do not tile [0, tau_f]: gap/overlap at "
                    f"{a.tau_end!r} vs {b.tau_start!r}"
                )

    @property
    def switch_times(self) -> list[float]:
        return [s.tau_end for s in self.segments[:-1]]

    @property
    def boundary_u(self) -> tuple[float, float]:
        """(u before tau=0, u after tau_f): the static trap values."""
        return 1.0, self.gamma**-4

    def u(self, tau):
        edges = np.array(self.switch_times)
        funcs = [s.u for s in self.segments]
        return piecewise_eval(edges, self.tau_f, funcs, tau)

    def max_abs_u(self, samples_per_segment: int = 4097) -> float:
        worst = 0.0
        for seg in self.segments:
            if seg.tau_end == seg.tau_start:
                continue
            t = np.linspace(seg.tau_start, seg.tau_end, samples_per_segment)
            worst = max(worst, float(np.max(np.abs(seg.u(t)))))
        return worst

    def to_dict(self) -> dict:
        d = {
            "family": self.family,
            "gamma": self.gamma,
            "delta": self.delta,
            "tau_f": self.tau_f,
            "switch_times": list(self.switch_times),
            "boundary_u": list(self.boundary_u),
            "segments": [
                {"kind": s.kind, "tau_start": s.tau_start, "tau_end": s.tau_end}
                for s in self.segments
            ],
            "constants": dict(self.constants),
            "metadata": dict(self.metadata),
        }
        return d


def _const_u(value: float):
    return lambda t: np.full(np.shape(t), float(value))


# --- closed-form branch evaluators (y = b^2) ---------------------------------

def _expanding_branch(delta: float):
    """y = (d-1)/2d + (d+1)/2d * cosh(2 sqrt(d) tau): u = -delta from (1, 0)."""
    p = (delta - 1.0) / (2.0 * delta)
    q = (delta + 1.0) / (2.0 * delta)
    w = 2.0 * math.sqrt(delta)

    def b(t):
        return np.sqrt(p + q * np.cosh(w * t))

    def bdot(t):
        y = p + q * np.cosh(w * t)
        return q * w * np.sinh(w * t) / (2.0 * np.sqrt(y))

    def bddot(t):
        y = p + q * np.cosh(w * t)
        ydot = q * w * np.sinh(w * t)
        yddot = q * w * w * np.cosh(w * t)
        return yddot / (2.0 * np.sqrt(y)) - ydot * ydot / (4.0 * y**1.5)

    return b, bdot, bddot


def _arrival_branch(gamma: float, delta: float, tau_f: float):
    """y = (dg^4+1)/2dg^2 + (dg^4-1)/2dg^2 * cos(2 sqrt(d)(tau_f - tau)):
    u = +delta into (gamma, 0) at tau_f."""
    g2 = gamma * gamma
    p = (delta * g2 * g2 + 1.0) / (2.0 * delta * g2)
    q = (delta * g2 * g2 - 1.0) / (2.0 * delta * g2)
    w = 2.0 * math.sqrt(delta)

    def b(t):
        return np.sqrt(p + q * np.cos(w * (tau_f - t)))

    def bdot(t):
        y = p + q * np.cos(w * (tau_f - t))
        return q * w * np.sin(w * (tau_f - t)) / (2.0 * np.sqrt(y))

    def bddot(t):
        y = p + q * np.cos(w * (tau_f - t))
        ydot = q * w * np.sin(w * (tau_f - t))
        yddot = -q * w * w * np.cos(w * (tau_f - t))
        return yddot / (2.0 * np.sqrt(y)) - ydot * ydot / (4.0 * y**1.5)

    return b, bdot, bddot


def _singular_branch(c1: float, c2: float):
    """y = 2 c1 tau + c2 on the singular arc; bdot*b = c1."""

    def b(t):
        return np.sqrt(2.0 * c1 * t + c2)

    def bdot(t):
        return c1 / np.sqrt(2.0 * c1 * t + c2)

    def bddot(t):
        return -c1 * c1 / (2.0 * c1 * t + c2) ** 1.5

    def u(t):
        y = 2.0 * c1 * t + c2
        return (1.0 + c1 * c1) / (y * y)

    return b, bdot, bddot, u


# --- bang-bang ----------------------------------------------------------------

def _acosh_arg(x: float, what: str) -> float:
    if x < 1.0 - 1e-12:
        raise InfeasibleParametersError(
            f"{what}: acosh argument {x!r} < 1", offending=x
        )
    return max(x, 1.0)


def _acos_arg(x: float, what: str) -> float:
    if abs(x) > 1.0 + 1e-12:
        raise InfeasibleParametersError(
            f"{what}: acos argument {x!r} outside [-1, 1]", offending=x
        )
    return min(max(x, -1.0), 1.0)


def bangbang_times(gamma: float, delta: float) -> tuple[float, float]:
    """Switch and arrival intervals (tau1, tau2) of the time-optimal control.

    tau1 = acosh[(d g^4 + 1)/(g^2 (d + 1))]/(2 sqrt(d)),
    tau2 = acos [g^2 (d - 1)/(d g^4 - 1)]/(2 sqrt(d))  (principal branch).
    """
    ControlBound(delta).require_feasible(gamma)
    g2 = gamma * gamma
    arg1 = _acosh_arg(
        (delta * g2 * g2 + 1.0) / (g2 * (delta + 1.0)), "bang-bang tau1"
    )
    arg2 = _acos_arg(
        g2 * (delta - 1.0) / (delta * g2 * g2 - 1.0), "bang-bang tau2"
    )
    w = 2.0 * math.sqrt(delta)
    return math.acosh(arg1) / w, math.acos(arg2) / w


def minimal_time(gamma: float, delta: float) -> float:
    """Shortest reachable duration: the bang-bang tau1 + tau2."""
    t1, t2 = bangbang_times(gamma, delta)
    return t1 + t2


def bangbang_protocol(gamma: float, delta: float):
    """Time-optimal two-segment protocol and its closed-form trajectory."""
    tau1, tau2 = bangbang_times(gamma, delta)
    tau_f = tau1 + tau2
    if tau_f == 0.0:  # gamma = 1: nothing to do
        proto = Protocol(
            family="bang-bang",
            segments=(ProtocolSegment(ANALYTIC, 0.0, 0.0, _const_u(1.0)),),
            gamma=gamma,
            delta=delta,
            tau_f=0.0,
        )
        return proto, ScalingTrajectory.constant(1.0, 0.0)

    b1, bd1, bdd1 = _expanding_branch(delta)
    b2, bd2, bdd2 = _arrival_branch(gamma, delta, tau_f)
    proto = Protocol(
        family="bang-bang",
        segments=(
            ProtocolSegment(BANG_LOW, 0.0, tau1, _const_u(-delta)),
            ProtocolSegment(BANG_HIGH, tau1, tau_f, _const_u(delta)),
        ),
        gamma=gamma,
        delta=delta,
        tau_f=tau_f,
        metadata={"verified_expansion": gamma >= 1.0},
    )
    traj = ScalingTrajectory(
        [
            ClosedFormSegment(0.0, tau1, b1, bd1, bdd1),
            ClosedFormSegment(tau1, tau_f, b2, bd2, bdd2),
        ],
        gamma=gamma,
        bddot_bc_ok=False,  # control jumps at 0+ and tau_f-
    )
    return proto, traj


# --- bang-singular-bang -------------------------------------------------------

def c1_upper_bound(gamma: float, delta: float) -> float:
    """Largest c1 with a real second junction: (d g^4 - 1)/(2 sqrt(d) g^2)."""
    return (delta * gamma**4 - 1.0) / (2.0 * math.sqrt(delta) * gamma**2)


def bsb_junctions(c1: float, gamma: float, delta: float) -> tuple[float, float]:
    """Squared positions b^2 at the two junctions of the singular arc."""
    if c1 <= 0.0:
        raise DomainError(f"c1 must be > 0, got {c1!r}")
    g4 = gamma**4
    s = 4.0 * c1 * c1 + 2.0
    disc1 = delta * delta + s * delta + 1.0
    disc2 = delta * delta * g4 * g4 - s * delta * g4 + 1.0
    # disc2 is an O(eps)-cancellation of (delta*g4)^2-sized terms at c1_max
    if disc2 < -1e-12 * (delta * g4 + 1.0) ** 2:
        raise InfeasibleParametersError(
            f"c1={c1!r} too large: second junction turns complex "
            f"(c1_max={c1_upper_bound(gamma, delta)!r})",
            offending=c1,
        )
    disc2 = max(disc2, 0.0)
    y1 = (delta - 1.0 + math.sqrt(disc1)) / (2.0 * delta)
    y2 = (delta * g4 + 1.0 + math.sqrt(disc2)) / (2.0 * delta * gamma**2)
    return y1, y2


def bsb_interval_times(
    c1: float, gamma: float, delta: float
) -> tuple[float, float, float]:
    """Durations (tau1, tau2, tau3) of the three segments for a given c1.

    tau1/tau3 invert the cosh/cos branches at the junction values; tau2
    follows from b^2 = 2 c1 tau + c2 on the arc.
    """
    y1, y2 = bsb_junctions(c1, gamma, delta)
    g2 = gamma * gamma
    w = 2.0 * math.sqrt(delta)
    arg1 = _acosh_arg(
        (2.0 * delta * y1 - (delta - 1.0)) / (delta + 1.0), "bsb tau1"
    )
    arg3 = _acos_arg(
        (2.0 * delta * g2 * y2 - delta * g2 * g2 - 1.0) / (delta * g2 * g2 - 1.0),
        "bsb tau3",
    )
    tau1 = math.acosh(arg1) / w
    tau2 = max((y2 - y1) / (2.0 * c1), 0.0)
    tau3 = math.acos(arg3) / w
    return tau1, tau2, tau3


def solve_c1(tau_f: float, gamma: float, delta: float) -> float:
    """Find c1 with tau1 + tau2 + tau3 = tau_f by bisection.

    The total duration decreases monotonically in c1 from ~(gamma^2-1)/(2 c1)
    down to the bang-bang minimum at c1_max.
    """
    tau_min = minimal_time(gamma, delta)
    if tau_f < tau_min * (1.0 - 1e-12):
        raise InfeasibleDurationError(tau_f, tau_min)
    hi = c1_upper_bound(gamma, delta)
    if tau_f <= tau_min * (1.0 + 1e-12):
        return hi
    lo = (gamma * gamma - 1.0) / (2.0 * _TAU_F_CAP)

    def total(c1: float) -> float:
        return sum(bsb_interval_times(c1, gamma, delta))

    if total(lo) < tau_f:
        raise UnsupportedDurationError(
            f"tau_f={tau_f!r} exceeds the supported range (~{_TAU_F_CAP:g})",
            offending=tau_f,
        )
    f_hi = total(hi) - tau_f
    if f_hi > 0.0:
        raise BracketError(
            f"duration at c1_max is {f_hi + tau_f!r} > requested {tau_f!r}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if total(mid) > tau_f:
            lo = mid
        else:
            hi = mid
    c1 = 0.5 * (lo + hi)
    if abs(total(c1) - tau_f) > 1e-10 * tau_f:
        raise BracketError(
            f"bisection residual {total(c1) - tau_f!r} too large at c1={c1!r}; "
            "duration is not monotone in c1 here"
        )
    return c1


def singular_control(x1, x2):
    """Control holding the state on the singular arc: (1 + x1^2 x2^2)/x1^4."""
    x1a = np.asarray(x1, dtype=float)
    if np.any(x1a <= 0.0):
        raise DomainError(f"x1 must be > 0, got {x1!r}")
    out = (1.0 + x1a * x1a * np.asarray(x2, float) ** 2) / x1a**4
    return float(out) if np.ndim(x1) == 0 and np.ndim(x2) == 0 else out


def bsb_protocol(tau_f: float, gamma: float, delta: float):
    """Three-segment protocol -delta, u_s, +delta of total duration tau_f.

    Degenerates to the bang-bang protocol at tau_f = tau_min.  gamma = 1
    reduces to the static singular arc u = 1.
    """
    if gamma == 1.0:
        ControlBound(delta).require_feasible(gamma)
        b, bd, bdd, u = _singular_branch(0.0, 1.0)
        proto = Protocol(
            family="bang-singular-bang",
            segments=(ProtocolSegment(SINGULAR, 0.0, tau_f, u),),
            gamma=1.0,
            delta=delta,
            tau_f=tau_f,
            constants={"c1": 0.0, "c2": 1.0},
        )
        traj = ScalingTrajectory(
            [ClosedFormSegment(0.0, tau_f, b, bd, bdd)], gamma=1.0
        )
        return proto, traj

    tau_min = minimal_time(gamma, delta)
    if tau_f <= tau_min * (1.0 + 1e-12):
        if tau_f < tau_min * (1.0 - 1e-12):
            raise InfeasibleDurationError(tau_f, tau_min)
        return bangbang_protocol(gamma, delta)

    c1 = solve_c1(tau_f, gamma, delta)
    y1, y2 = bsb_junctions(c1, gamma, delta)
    tau1, tau2, tau3 = bsb_interval_times(c1, gamma, delta)
    c2 = y1 - 2.0 * c1 * tau1
    t12 = tau1 + tau2
    total = tau1 + tau2 + tau3

    b1, bd1, bdd1 = _expanding_branch(delta)
    bs, bds, bdds, us = _singular_branch(c1, c2)
    b3, bd3, bdd3 = _arrival_branch(gamma, delta, total)
    u_s_start = (1.0 + c1 * c1) / (y1 * y1)
    proto = Protocol(
        family="bang-singular-bang",
        segments=(
            ProtocolSegment(BANG_LOW, 0.0, tau1, _const_u(-delta)),
            ProtocolSegment(SINGULAR, tau1, t12, us),
            ProtocolSegment(BANG_HIGH, t12, total, _const_u(delta)),
        ),
        gamma=gamma,
        delta=delta,
        tau_f=total,
        constants={"c1": c1, "c2": c2},
        metadata={
            "verified_expansion": gamma >= 1.0,
            # for delta < 1 the printed arc control starts above the bound:
            # u_s(tau1) = delta + (1 - delta)/b^2(tau1)
            "singular_exceeds_bound": bool(u_s_start > delta * (1.0 + 1e-12)),
        },
    )
    traj = ScalingTrajectory(
        [
            ClosedFormSegment(0.0, tau1, b1, bd1, bdd1),
            ClosedFormSegment(tau1, t12, bs, bds, bdds),
            ClosedFormSegment(t12, total, b3, bd3, bdd3),
        ],
        gamma=gamma,
        bddot_bc_ok=False,
    )
    return proto, traj


# --- unconstrained (Euler-Lagrange limit) --------------------------------------

def unconstrained_protocol(tau_f: float, gamma: float):
    """Single-arc protocol b = sqrt((gamma^2 - 1) tau/tau_f + 1).

    This is the delta -> infinity limit of the singular arc (c1 =
    (gamma^2 - 1)/(2 tau_f), c2 = 1); the endpoint slope conditions
    bdot(0) = bdot(tau_f) = 0 are not met.
    """
    if tau_f <= 0.0:
        raise DomainError(f"tau_f must be > 0, got {tau_f!r}")
    c1 = (gamma * gamma - 1.0) / (2.0 * tau_f)
    b, bd, bdd, u = _singular_branch(c1, 1.0)
    proto = Protocol(
        family="unconstrained",
        segments=(ProtocolSegment(SINGULAR, 0.0, tau_f, u),),
        gamma=gamma,
        delta=None,
        tau_f=tau_f,
        constants={"c1": c1, "c2": 1.0},
        metadata={"verified_expansion": gamma >= 1.0},
    )
    bc_trivial = gamma == 1.0
    traj = ScalingTrajectory(
        [ClosedFormSegment(0.0, tau_f, b, bd, bdd)],
        gamma=gamma,
        bdot_bc_ok=bc_trivial,
        bddot_bc_ok=bc_trivial,
    )
    return proto, traj


# --- polynomial ansatz ---------------------------------------------------------

def polynomial_protocol(tau_f: float, gamma: float):
    """Quintic-smoothstep protocol b(s) = 1 + (gamma-1)(10 s^3 - 15 s^4 + 6 s^5).

    Meets all six endpoint conditions exactly.  u(tau) follows from the
    scaling equation and may become negative (expulsive trap) for short
    durations; the extrema are reported in the metadata.
    """
    if tau_f <= 0.0:
        raise DomainError(f"tau_f must be > 0, got {tau_f!r}")
    dg = gamma - 1.0
    coeffs = (1.0, 0.0, 0.0, 10.0 * dg, -15.0 * dg, 6.0 * dg)  # b(s), s = tau/tau_f

    def b(t):
        s = np.asarray(t) / tau_f
        return np.polynomial.polynomial.polyval(s, coeffs)

    def bdot(t):
        s = np.asarray(t) / tau_f
        return 30.0 * dg * s * s * (1.0 - s) ** 2 / tau_f

    def bddot(t):
        s = np.asarray(t) / tau_f
        return 60.0 * dg * s * (1.0 - s) * (1.0 - 2.0 * s) / (tau_f * tau_f)

    def u(t):
        bt = b(t)
        return 1.0 / bt**4 - bddot(t) / bt

    s_scan = np.linspace(0.0, 1.0, 8193)
    u_scan = u(s_scan * tau_f)
    proto = Protocol(
        family="polynomial",
        segments=(ProtocolSegment(ANALYTIC, 0.0, tau_f, u),),
        gamma=gamma,
        delta=None,
        tau_f=tau_f,
        constants={"coefficients": list(coeffs)},
        metadata={
            "verified_expansion": gamma >= 1.0,
            "min_u": float(np.min(u_scan)),
            "max_u": float(np.max(u_scan)),
            "max_abs_u": float(np.max(np.abs(u_scan))),
            "expulsive": bool(np.min(u_scan) < 0.0),
        },
    )
    traj = ScalingTrajectory(
        [ClosedFormSegment(0.0, tau_f, b, bdot, bddot)], gamma=gamma
    )
    return proto, traj


def make_protocol(family: str, gamma: float, tau_f: float | None, delta: float | None):
    """Dispatch a family name to its synthesis function.

    For bang-bang the duration is fixed; a provided tau_f must match
    tau_min to 1e-9 relative.
    """
    if family == "bang-bang":
        if delta is None:
            raise InfeasibleParametersError("bang-bang requires delta")
        if tau_f is not None:
            tmin = minimal_time(gamma, delta)
            if abs(tau_f - tmin) > 1e-9 * max(1.0, tmin):
                raise InfeasibleDurationError(tau_f, tmin)
        return bangbang_protocol(gamma, delta)
    if tau_f is None:
        raise InfeasibleParametersError(f"{family} requires a duration")
    if family == "bang-singular-bang":
        if delta is None:
            raise InfeasibleParametersError("bang-singular-bang requires delta")
        return bsb_protocol(tau_f, gamma, delta)
    if family == "unconstrained":
        return unconstrained_protocol(tau_f, gamma)
    if family == "polynomial":
        return polynomial_protocol(tau_f, gamma)
    raise InfeasibleParametersError(f"unknown protocol family {family!r}")
