import math

import pytest

from trapexpand import (
    ATOMIC_MASS_KG,
    ControlBound,
    DimensionlessFrame,
    InfeasibleParametersError,
    InvalidSpecError,
    TrapSpec,
    to_dimensionless,
)


def make_spec(**overrides):
    fields = dict(
        omega0=2 * math.pi * 2500.0,
        omega_f=2 * math.pi * 25.0,
        waist=21.2e-6,
        mass=87.0 * ATOMIC_MASS_KG,
    )
    fields.update(overrides)
    return TrapSpec(**fields)


def test_gamma_identity_case():
    spec = make_spec(omega_f=2 * math.pi * 2500.0)
    assert spec.gamma() == 1.0


def test_gamma_paper_value(si_trap):
    assert si_trap.gamma() == pytest.approx(10.0, rel=1e-14)


def test_w_tilde_against_hand_evaluation():
    # independent arithmetic: a0 = sqrt(hbar/(m omega0)) with literal constants
    mass = 87.0 * 1.66053906660e-27
    omega0 = 2 * math.pi * 2500.0
    a0 = math.sqrt(1.054571817e-34 / (mass * omega0))
    spec = make_spec(waist=20 * 1060e-9, mass=mass)
    assert spec.dimensionless_waist() == pytest.approx(20 * 1060e-9 / a0, rel=1e-12)
    # sanity on the scale itself: a0 is a couple hundred nm for these numbers
    assert 1e-7 < a0 < 1e-6


def test_to_dimensionless_contract(si_trap):
    gamma, w_tilde, tau_of_t = to_dimensionless(si_trap)
    assert gamma == pytest.approx(10.0, rel=1e-14)
    assert w_tilde == pytest.approx(si_trap.dimensionless_waist(), rel=1e-15)
    assert tau_of_t == si_trap.omega0


@pytest.mark.parametrize("t", [1e-6, 5e-4, 0.1, 3.0])
def test_time_round_trip_identity(si_trap, t):
    frame = DimensionlessFrame.from_spec(si_trap)
    assert frame.t_from_tau(frame.tau_from_t(t)) == pytest.approx(t, rel=1e-14)
    assert frame.si_from_x(frame.x_from_si(t)) == pytest.approx(t, rel=1e-14)


@pytest.mark.parametrize("c", [0.1, 3.0, 1e4])
def test_gamma_invariant_under_frequency_rescaling(c):
    base = make_spec()
    scaled = make_spec(omega0=base.omega0 * c, omega_f=base.omega_f * c)
    assert scaled.gamma() == pytest.approx(base.gamma(), rel=1e-12)


@pytest.mark.parametrize("name", ["omega0", "omega_f", "waist", "mass"])
def test_invalid_field_error_names_the_field(name):
    with pytest.raises(InvalidSpecError) as err:
        make_spec(**{name: -1.0})
    assert err.value.field == name
    with pytest.raises(InvalidSpecError):
        make_spec(**{name: float("nan")})


def test_control_bound_validation():
    with pytest.raises(InvalidSpecError):
        ControlBound(0.0)
    bound = ControlBound(1.0)
    bound.require_feasible(10.0)
    with pytest.raises(InfeasibleParametersError):
        bound.require_feasible(0.9)  # delta*gamma^4 < 1
