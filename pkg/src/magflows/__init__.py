"""Magnetic geodesic flows on surfaces with polynomial-in-momenta and
rational-in-momenta first integrals: geometry, integration, integral
checks, and the constructions generating the worked examples."""

from .catalog import CatalogEntry, EXAMPLE_NAMES, get_example, list_examples
from .errors import (
    DegenerateD,
    DomainError,
    EvaluationError,
    GuardError,
    MagflowsError,
    NearPole,
    NoConvergence,
    PoleInC,
    SeriesDivergence,
    SingularJacobian,
    SingularMetric,
    SingularPoint,
    StepFailure,
    UnknownExample,
)
from .flow import (
    ConservationReport,
    Trajectory,
    TrajectoryConfig,
    conservation_drift,
    convergence_order,
    integrate,
    magnetic_rhs,
)
from .geometry import (
    ChartDomain,
    MagneticSystem,
    Metric,
    conformal_metric,
    gaussian_curvature,
    hamiltonian,
    momentum_on_level,
)
from .hodograph import (
    HodographConstants,
    algebraic_residual,
    closed_form_abzero,
    continued_solve,
    example3_system,
    magnetic_from_fg,
    newton_solve,
    pde41_residual_fd,
    reconstruct_fields,
)
from .integrals import (
    BracketScanConfig,
    FirstIntegral,
    ResidualReport,
    functional_independence_rank,
    hamiltonian_integral,
    level_set_bracket_scan,
    magnetic_bracket_fd,
    magnetic_bracket_pair,
)
from .rational import (
    EllipticHalf,
    LogNu1,
    LogRadial,
    PolynomialCos,
    RationalFlowBundle,
    build_bundle,
    bundle_from_descriptor,
    chart_to_xy,
    characteristic_speeds,
    condition_D,
    from_riemann,
    pde511_residual,
    riemann_invariants,
    xy_to_chart_logradial,
)
from .specfun import (
    elliptic_E,
    elliptic_K,
    elliptic_d2E,
    elliptic_dE,
    hyp2f1,
    terminating_2f1_coeffs,
)

__version__ = "0.1.0"

__all__ = [
    "BracketScanConfig",
    "CatalogEntry",
    "ChartDomain",
    "ConservationReport",
    "DegenerateD",
    "DomainError",
    "EXAMPLE_NAMES",
    "EllipticHalf",
    "EvaluationError",
    "FirstIntegral",
    "GuardError",
    "HodographConstants",
    "LogNu1",
    "LogRadial",
    "MagflowsError",
    "MagneticSystem",
    "Metric",
    "NearPole",
    "NoConvergence",
    "PoleInC",
    "PolynomialCos",
    "RationalFlowBundle",
    "ResidualReport",
    "SeriesDivergence",
    "SingularJacobian",
    "SingularMetric",
    "SingularPoint",
    "StepFailure",
    "Trajectory",
    "TrajectoryConfig",
    "UnknownExample",
    "algebraic_residual",
    "build_bundle",
    "bundle_from_descriptor",
    "chart_to_xy",
    "characteristic_speeds",
    "closed_form_abzero",
    "condition_D",
    "conformal_metric",
    "conservation_drift",
    "continued_solve",
    "convergence_order",
    "elliptic_E",
    "elliptic_K",
    "elliptic_d2E",
    "elliptic_dE",
    "example3_system",
    "from_riemann",
    "functional_independence_rank",
    "gaussian_curvature",
    "get_example",
    "hamiltonian",
    "hamiltonian_integral",
    "hyp2f1",
    "integrate",
    "level_set_bracket_scan",
    "list_examples",
    "magnetic_bracket_fd",
    "magnetic_bracket_pair",
    "magnetic_from_fg",
    "magnetic_rhs",
    "momentum_on_level",
    "newton_solve",
    "pde41_residual_fd",
    "pde511_residual",
    "reconstruct_fields",
    "riemann_invariants",
    "terminating_2f1_coeffs",
    "xy_to_chart_logradial",
]
