import math

import pytest

from trapexpand import ATOMIC_MASS_KG, TrapSpec

# Reference SI parameters used throughout: lambda = 1060 nm, w0 = 20 lambda,
# omega(0) = 2 pi 2500 Hz, omega(t_f) = 2 pi 25 Hz, mass 87 u (assumed).
LAMBDA_M = 1060e-9
OMEGA0 = 2.0 * math.pi * 2500.0
OMEGA_F = 2.0 * math.pi * 25.0


@pytest.fixture(scope="session")
def si_trap() -> TrapSpec:
    return TrapSpec(
        omega0=OMEGA0,
        omega_f=OMEGA_F,
        waist=20.0 * LAMBDA_M,
        mass=87.0 * ATOMIC_MASS_KG,
    )
