"""Stability analysis of periodic heterogeneous vehicle formations.

Builds decentralized flock models with two or three repeating agent
types, reduces the circle system to per-mode characteristic polynomials,
evaluates closed-form necessary stability conditions, simulates the line
system under two boundary-condition families, and validates the small-
mode root-curve geometry numerically.
"""

from .conditions import (
    A0_SLOPE_FACTOR,
    ConditionClause,
    ConditionReport,
    D_func,
    E_func,
    Overall,
    conditions,
    diatomic_conditions,
    necessary_condition_value,
    triatomic_conditions,
)
from .errors import (
    BlowUp,
    BranchAmbiguity,
    ConstraintViolation,
    DegenerateLeadingCoefficient,
    FlockstabError,
    HypothesisViolated,
    ShapeError,
    SizeError,
    WrongArrangement,
)
from .model import (
    AgentParams,
    AlphaBeta,
    Arrangement,
    BoundaryCondition,
    FlockSpec,
    SystemMatrix,
    Topology,
    alphas_betas,
    assemble_line,
    assemble_periodic,
    build_spec,
    load_spec,
    save_spec,
    spec_from_dict,
    spec_to_dict,
)
from .rootcurves import (
    Branch,
    RootCurve,
    TangencyReport,
    branch_curvature,
    branch_ratios,
    mode_coefficients,
    orthogonality_angle,
    predicted_branch,
    right_angle_deviation,
    small_root_counts,
    tangency_ratio,
    tangency_report,
    track_branches,
    track_polynomial_branches,
)
from .simulation import (
    ScanPoint,
    ScanResult,
    Trajectory,
    TransientReport,
    scan_N,
    simulate,
    transient,
)
from .spectral import (
    CharPoly,
    ModeSpectrum,
    Stability,
    StabilityVerdict,
    a0_constant_term,
    a0_derivative_at_zero,
    char_poly,
    classify,
    mode_roots,
    spectrum_periodic,
)

__version__ = "0.1.0"
