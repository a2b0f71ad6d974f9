"""Strong-confinement expansions for charged particles in a spherical box.

The library scales an N-particle Coulomb system to a unit impenetrable
sphere, computes the leading perturbation coefficients (eps0, eps1) of the
confinement expansion from exact sphere eigenstates, turns them into physical
energy curves, and cross-checks the two-electron case with a small
configuration-interaction solver.
"""

from .ci import (
    CiBasis,
    CiSolution,
    build_hamiltonian,
    ground_state,
    interaction_matrix,
    kinetic_diagonal,
    overlap_scan,
    second_order_estimate,
    second_order_sum_over_states,
    solve_ground,
)
from .coulomb import CoulombTable, PairIntegralKey, get_table
from .errors import (
    BoxatomError,
    ConvergenceError,
    UnsupportedModeError,
    ValidationError,
)
from .perturbation import (
    BreakdownTerm,
    EnergyCurvePoint,
    NuclearMotionReport,
    PerturbationCoefficients,
    energy_curve,
    epsilon0,
    epsilon1,
    ground_occupation,
    nuclear_motion_report,
    turnover_lambda,
)
from .quadrature import (
    QuadratureRule,
    gauss_legendre,
    integrate,
    integrate_square,
    integrate_triangular,
)
from .sphere import (
    ModeIndex,
    RadialMode,
    bessel_zero,
    build_radial_mode,
    mode_energy,
    spherical_jl,
)
from .system import (
    HELIUM_NUCLEAR_MASS,
    DimensionlessSystem,
    Particle,
    ScaledParticle,
    SystemDefinition,
    helium_system,
    load_system,
    nondimensionalize,
    system_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "HELIUM_NUCLEAR_MASS",
    "BoxatomError",
    "BreakdownTerm",
    "CiBasis",
    "CiSolution",
    "ConvergenceError",
    "CoulombTable",
    "DimensionlessSystem",
    "EnergyCurvePoint",
    "ModeIndex",
    "NuclearMotionReport",
    "PairIntegralKey",
    "Particle",
    "PerturbationCoefficients",
    "QuadratureRule",
    "RadialMode",
    "ScaledParticle",
    "SystemDefinition",
    "UnsupportedModeError",
    "ValidationError",
    "bessel_zero",
    "build_hamiltonian",
    "build_radial_mode",
    "energy_curve",
    "epsilon0",
    "epsilon1",
    "gauss_legendre",
    "get_table",
    "ground_occupation",
    "ground_state",
    "helium_system",
    "integrate",
    "integrate_square",
    "integrate_triangular",
    "interaction_matrix",
    "kinetic_diagonal",
    "load_system",
    "mode_energy",
    "nondimensionalize",
    "nuclear_motion_report",
    "overlap_scan",
    "second_order_estimate",
    "second_order_sum_over_states",
    "solve_ground",
    "spherical_jl",
    "system_from_dict",
    "turnover_lambda",
]
