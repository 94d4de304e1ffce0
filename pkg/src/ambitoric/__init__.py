"""Explicit ambitoric Kähler structures in four dimensions.

Exact rational construction of the three normal forms, their coefficient
conditions, toric compactifications and stability, plus floating-point oracles
that re-derive the closed forms numerically.
"""

from .exactmath import (
    Positivity,
    PositivityResult,
    Quadratic,
    Quartic,
    discriminant_form,
    inner,
    poisson_bracket,
    poly_eval_derive,
    quadratic_invariants,
    sturm_positive_on,
    transvect,
)
from .structures import (
    AffineFunction,
    AmbitoricData,
    ConditionReport,
    Kind,
    boundary_data,
    condition_report,
    extremal_affine_coeffs,
    h_matrix_at,
    invert_momentum,
    metric_frame_at,
    bach_flat_example,
    momentum,
    scalar_curvature_at,
    validate_data,
)
from .polytope import LabelledPolytope, LatticeInfo, Moments, build_polytope, lattice_check, moments
from .stability import (
    Crease,
    ExtremalField,
    PLFunction,
    StabilityReport,
    Verdict,
    extremal_field,
    futaki_crease,
    futaki_pl,
    stability_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "AffineFunction", "AmbitoricData", "ConditionReport", "Crease", "ExtremalField", "Kind",
    "LabelledPolytope", "LatticeInfo", "Moments", "PLFunction", "Positivity", "PositivityResult",
    "Quadratic", "Quartic", "StabilityReport", "Verdict", "bach_flat_example", "boundary_data",
    "build_polytope", "condition_report", "discriminant_form", "extremal_affine_coeffs",
    "extremal_field", "futaki_crease", "futaki_pl", "h_matrix_at", "inner", "invert_momentum",
    "lattice_check", "metric_frame_at", "moments", "momentum", "poisson_bracket",
    "poly_eval_derive", "quadratic_invariants", "scalar_curvature_at", "stability_verdict",
    "sturm_positive_on", "transvect", "validate_data",
]
