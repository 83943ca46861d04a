"""Exception types shared across the toolkit."""


class TrapExpandError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpecError(TrapExpandError, ValueError):
    """A physical parameter is missing, non-positive, or inconsistent."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(TrapExpandError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfeasibleParametersError(TrapExpandError, ValueError):
    """(gamma, delta, tau_f) admit no protocol of the requested family."""

    def __init__(self, message: str, offending: float | None = None):
        super().__init__(message)
        self.offending = offending


class InfeasibleDurationError(InfeasibleParametersError):
    """Requested duration is below the bang-bang minimal time."""

    def __init__(self, tau_f: float, tau_min: float):
        super().__init__(
            f"tau_f={tau_f!r} is shorter than the minimal bang-bang time "
            f"tau_min={tau_min:.6f}",
            offending=tau_f,
        )
        self.tau_min = tau_min


class UnsupportedDurationError(InfeasibleParametersError):
    """Requested duration exceeds the supported singular-arc range."""


class BracketError(TrapExpandError, RuntimeError):
    """Root bracketing failed; the assumed monotonicity does not hold."""


class SingularTrajectoryError(TrapExpandError, RuntimeError):
    """The integrated scaling factor crossed zero."""

    def __init__(self, tau: float):
        super().__init__(f"scaling factor reached b <= 0 at tau={tau:.6g}")
        self.tau = tau


class DivergenceError(TrapExpandError, RuntimeError):
    """The integration produced NaN or infinity."""

    def __init__(self, tau: float):
        super().__init__(f"integration diverged (NaN/inf) at tau={tau:.6g}")
        self.tau = tau


class GridError(TrapExpandError, ValueError):
    """The spatial grid cannot resolve or contain the requested state."""


class ContractError(TrapExpandError, ValueError):
    """An input violates a documented precondition (e.g. unnormalized state)."""


class AmplitudeRangeError(TrapExpandError, ValueError):
    """Quantum numbers too large for the log-space factorial evaluation."""


class LeakError(TrapExpandError, RuntimeError):
    """Probability escaped past the grid edge during time evolution."""

    def __init__(self, tau: float, leak: float, threshold: float):
        super().__init__(
            f"edge leak {leak:.3e} exceeded threshold {threshold:.3e} "
            f"at tau={tau:.6g}"
        )
        self.tau = tau
        self.leak = leak
        self.threshold = threshold


class UnitarityError(TrapExpandError, RuntimeError):
    """Norm drift above tolerance during time evolution."""

    def __init__(self, drift: float):
        super().__init__(f"norm drift {drift:.3e} exceeds 1e-8")
        self.drift = drift
