"""Bergman shift matrices of orthogonality measures and their asymptotics."""

from .coefficients import (
    DiscretePlanarMeasure,
    DistributionSpec,
    JacobiSequence,
    VerblunskySequence,
    alexandrov,
    constant_jacobi,
    constant_verblunsky,
    decaying_verblunsky,
    degenerate_pair,
    from_spec,
    periodic_jacobi,
    roots_of_unity_measure,
    sample_iid,
    strip,
    universal_circle_sequence,
    universal_jacobi_pair,
)
from .errors import (
    BergshiftError,
    BoundsError,
    ContaminationError,
    DegenerateMeasureError,
    EigensolverError,
    InsufficientDataError,
    InvalidCoefficientError,
    InvalidParameterError,
    ModelError,
    NumericError,
    PoleError,
)
from .hessenberg import (
    HessenbergTruncation,
    MatrixWindow,
    arnoldi_truncation,
    ggt_truncation,
    jacobi_truncation,
    kappa_ratio,
    matrix_power_diagonal,
    window,
)
from .polynomials import eval_monic, kappa, monic_coefficients, ratio, ratio_table, resolvent_diagonal
from .asymptotics import (
    LaurentCoefficients,
    beta_term,
    cesaro_moment,
    h_coeff,
    laurent_ratio,
    path_sum_diagonal,
    relative_cesaro_moments,
    relative_h_profile,
    relative_weak_moments,
    weak_moment,
)
from .zeros import ZeroSet, zero_moments, zeros
from .rightlimits import (
    SubsequenceSpec,
    best_match,
    best_match_distance,
    detect_right_limit,
    normalized_ratio_difference,
    right_limit_difference,
)

__version__ = "0.1.0"
