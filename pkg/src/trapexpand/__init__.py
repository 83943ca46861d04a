"""Fast transitionless expansions of anharmonic cold-atom traps.

Design time-optimal and duration-targeted frequency protocols for a
trapped-atom expansion, bound the effect of the Gaussian-beam quartic
anharmonicity perturbatively, and verify everything with an exact 1D
split-operator simulation.
"""

from .errors import (
    AmplitudeRangeError,
    BracketError,
    ContractError,
    DivergenceError,
    DomainError,
    GridError,
    InfeasibleDurationError,
    InfeasibleParametersError,
    InvalidSpecError,
    LeakError,
    SingularTrajectoryError,
    TrapExpandError,
    UnitarityError,
    UnsupportedDurationError,
)
from .ermakov import (
    OCTState,
    ermakov_residual,
    integrate_ermakov,
    invariant_expectation,
    lewis_phase,
    mode_wavefunction,
    u_from_b,
)
from .fidelity import (
    FidelityReport,
    avg_perturbation_energy,
    beta_integral,
    f_el_bound,
    fidelity_bound,
    fidelity_second_order,
    first_order_amplitude,
    hermite_alpha,
    kinetic_moment,
    lambda_tilde,
)
from .grid import SpatialGrid, WaveFunction, overlap_fidelity
from .protocols import (
    FAMILIES,
    Protocol,
    ProtocolSegment,
    bangbang_protocol,
    bangbang_times,
    bsb_interval_times,
    bsb_junctions,
    bsb_protocol,
    c1_upper_bound,
    make_protocol,
    minimal_time,
    polynomial_protocol,
    singular_control,
    solve_c1,
    unconstrained_protocol,
)
from .simulate import (
    SimConfig,
    convergence_check,
    default_grid,
    evolve,
    potential_values,
    stationary_state,
)
from .trajectory import ClosedFormSegment, DenseSegment, ScalingTrajectory
from .units import (
    ATOMIC_MASS_KG,
    DEFAULT_MASS_AMU,
    HBAR,
    ControlBound,
    DimensionlessFrame,
    TrapSpec,
    to_dimensionless,
)

__version__ = "0.1.0"
