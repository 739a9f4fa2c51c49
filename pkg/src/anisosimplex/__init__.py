"""Geometry, interpolation and error-bound measurements for anisotropic simplices."""
from .errors import (
    AnisoSimplexError,
    DegenerateSimplexError,
    InsufficientSmoothnessError,
    InvalidDimensionError,
    InvalidFamilyParamsError,
    MeshParseError,
    NotPositiveDefiniteError,
    UnsupportedDegreeError,
)
from .fields import CallableField, PolynomialField, ScalarField, study_field
from .geometry import (
    GeometricReport,
    Simplex,
    StandardPosition,
    angles,
    assumption1_margin,
    circumradius,
    diameter_and_edges,
    full_report,
    measure,
    param_H_T,
    param_H_T0,
    standard_position,
)
from .interpolation import OperatorSpec, SimplexPolynomial, interpolate, interpolation_nodes
from .norms import NormSpec, anisotropic_rhs, classical_rhs, sobolev_seminorm
from .quadrature import QuadratureRule, make_rule
from .studies import (
    BoundReport,
    FamilySpec,
    StudyRow,
    family_generate,
    inverse_constant,
    measure_bound_constant,
    run_convergence,
    sliver_table,
)

__version__ = "0.1.0"
