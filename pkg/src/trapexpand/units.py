"""Trap parameters and the SI <-> dimensionless conversion contract.

All internal math is dimensionless: hbar = m = omega0 = 1, time tau =
omega0*t, length in units of a0 = sqrt(hbar/(m*omega0)), energy in
hbar*omega0.  SI values appear only at the CLI boundary.  The constant in
the auxiliary scaling equation is fixed to the initial trap frequency, so
it equals 1 in these units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleParametersError, InvalidSpecError

HBAR = 1.054_571_817e-34  # J s
ATOMIC_MASS_KG = 1.660_539_066_60e-27  # kg
DEFAULT_MASS_AMU = 87.0  # assumed species when a config omits the mass


@dataclass(frozen=True)
class TrapSpec:
    """Physical trap parameters in SI units.

    omega0, omega_f are angular frequencies (rad/s), waist is the Gaussian
    beam radius (m), mass the atomic mass (kg).
    """

    omega0: float
    omega_f: float
    waist: float
    mass: float
    hbar: float = HBAR

    def __post_init__(self):
        for name in ("omega0", "omega_f", "waist", "mass", "hbar"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise InvalidSpecError(name, f"must be a finite number, got {value!r}")
            if value <= 0:
                raise InvalidSpecError(name, f"must be > 0, got {value!r}")

    def gamma(self) -> float:
        """Expansion factor sqrt(omega0/omega_f); > 1 for an expansion."""
        return math.sqrt(self.omega0 / self.omega_f)

    def length_unit(self) -> float:
        """Harmonic-oscillator length a0 = sqrt(hbar/(m*omega0)) in meters."""
        return math.sqrt(self.hbar / (self.mass * self.omega0))

    def dimensionless_waist(self) -> float:
        """Waist in units of a0."""
        return self.waist / self.length_unit()


@dataclass(frozen=True)
class ControlBound:
    """Dimensionless bound delta on |u(tau)| = |omega^2(tau)/omega0^2|."""

    delta: float

    def __post_init__(self):
        if not (isinstance(self.delta, (int, float)) and self.delta > 0):
            raise InvalidSpecError("delta", f"must be > 0, got {self.delta!r}")

    def require_feasible(self, gamma: float) -> None:
        """Enforce delta*gamma^4 > 1 (real switching-time arguments)."""
        if self.delta * gamma**4 <= 1.0:
            raise InfeasibleParametersError(
                f"delta*gamma^4 = {self.delta * gamma**4!r} must exceed 1",
                offending=self.delta,
            )


@dataclass(frozen=True)
class DimensionlessFrame:
    """Conversion scales derived from a TrapSpec.

    time_unit = 1/omega0 (s), length_unit = a0 (m), energy_unit =
    hbar*omega0 (J).
    """

    time_unit: float
    length_unit: float
    energy_unit: float

    @classmethod
    def from_spec(cls, spec: TrapSpec) -> "DimensionlessFrame":
        return cls(
            time_unit=1.0 / spec.omega0,
            length_unit=spec.length_unit(),
            energy_unit=spec.hbar * spec.omega0,
        )

    def tau_from_t(self, t: float) -> float:
        return t / self.time_unit

    def t_from_tau(self, tau: float) -> float:
        return tau * self.time_unit

    def x_from_si(self, x: float) -> float:
        return x / self.length_unit

    def si_from_x(self, x: float) -> float:
        return x * self.length_unit


def to_dimensionless(spec: TrapSpec) -> tuple[float, float, float]:
    """Reduce a trap spec to (gamma, w_tilde, tau_of_t).

    tau_of_t is the time-scale factor omega0 (multiply t in seconds by it
    to get dimensionless tau).
    """
    return spec.gamma(), spec.dimensionless_waist(), spec.omega0
