"""Exact construction and verification engine for q-deformed multiple
Charlier polynomials on the lattice x(s) = (q^s - 1)/(q - 1)."""

from .qkernels import (
    FALLING,
    MONOMIAL,
    LatticePoly,
    MultiIndex,
    QContext,
    ValidationError,
)
from .constructors import (
    QCharlierPoly,
    build,
    build_explicit_r2,
    build_linear_system,
    build_recurrence,
    build_rodrigues,
    normalized_moment,
    rodrigues_constant,
)
from .relations import (
    NNRecurrenceCoeffs,
    SteplineCoeffs,
    diff_eq_residual,
    lowering_coeffs,
    nn_recurrence_coeffs,
    orthogonality_residuals,
    stepline_coeffs,
    verify_lowering,
    verify_nn_recurrence,
    verify_raising,
    verify_stepline,
)
from .classical import ClassicalCharlierPoly, classical_build, classical_diffeq_residual

__all__ = [
    "FALLING",
    "MONOMIAL",
    "LatticePoly",
    "MultiIndex",
    "QContext",
    "ValidationError",
    "QCharlierPoly",
    "build",
    "build_explicit_r2",
    "build_linear_system",
    "build_recurrence",
    "build_rodrigues",
    "normalized_moment",
    "rodrigues_constant",
    "NNRecurrenceCoeffs",
    "SteplineCoeffs",
    "diff_eq_residual",
    "lowering_coeffs",
    "nn_recurrence_coeffs",
    "orthogonality_residuals",
    "stepline_coeffs",
    "verify_lowering",
    "verify_nn_recurrence",
    "verify_raising",
    "verify_stepline",
    "ClassicalCharlierPoly",
    "classical_build",
    "classical_diffeq_residual",
]

__version__ = "0.1.0"
