"""Birkhoff normal forms in two degrees of freedom and the stability
determinant of the radiating oblate restricted three-body model."""

from .closedform import (
    CubicQuarticCoefficients,
    PoleError,
    d2_closed,
    d2_expanded,
    k0022,
    k1111,
    k2200,
)
from .normalform import (
    GeneratingFunction,
    NormalFormReport,
    ResonanceError,
    d2_from_k,
    divisor,
    frequency_shift_1dof,
    normalize,
    solve_homological_term,
)
from .polyalg import (
    COMPLEX_CHART,
    REAL_CHART,
    CanonicalPolynomial,
    ChartMismatchError,
    Frequencies,
    GradedHamiltonian,
    Monomial,
    complexify,
    grade,
    poisson_bracket,
    realify,
)
from .rtbpmodel import (
    CoefficientSet,
    D2Result,
    ModelDomainError,
    ModelParams,
    ScanRow,
    StabilityStatus,
    StabilityVerdict,
    build_model_hamiltonian,
    coefficient_series,
    coefficients,
    d2_eval,
    scan_omega1,
    stability_verdict,
    verdict_from_d2,
)

__version__ = "0.1.0"

__all__ = [
    "COMPLEX_CHART",
    "REAL_CHART",
    "CanonicalPolynomial",
    "ChartMismatchError",
    "CoefficientSet",
    "CubicQuarticCoefficients",
    "D2Result",
    "Frequencies",
    "GeneratingFunction",
    "GradedHamiltonian",
    "ModelDomainError",
    "ModelParams",
    "Monomial",
    "NormalFormReport",
    "PoleError",
    "ResonanceError",
    "ScanRow",
    "StabilityStatus",
    "StabilityVerdict",
    "build_model_hamiltonian",
    "coefficient_series",
    "coefficients",
    "complexify",
    "d2_closed",
    "d2_eval",
    "d2_expanded",
    "d2_from_k",
    "divisor",
    "frequency_shift_1dof",
    "grade",
    "k0022",
    "k1111",
    "k2200",
    "normalize",
    "poisson_bracket",
    "realify",
    "scan_omega1",
    "solve_homological_term",
    "stability_verdict",
    "verdict_from_d2",
    "__version__",
]
