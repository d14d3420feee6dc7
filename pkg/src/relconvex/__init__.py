"""Majorization relations, stochastic certificates, and convexity-point
certification for discrete measures, symmetric matrices, and polynomial
root distributions."""

from ._defaults import DEFAULT_TOL
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    HypothesisError,
    InputError,
    MassMismatchError,
    NotMajorizedError,
    RelconvexError,
)
from .kernels import BACKEND, NUMBA_AVAILABLE
from .measures import (
    Disc,
    Hull,
    Interval,
    WeightedMeasure,
    barycenter,
    empirical_from_samples,
    expectation,
    normalize,
)
from .majorization import (
    DoublyStochasticMatrix,
    decreasing_rearrangement,
    hlp_convex_sum_check,
    hlp_transfer_matrix,
    is_doubly_stochastic,
    is_majorized,
)
from .transport import (
    FeasibilityVerdict,
    ResidualReport,
    RowStochasticCertificate,
    classical_as_measures,
    generalized_hlp_verify,
    grid_oracle_residual,
    verify_certificate,
    weighted_majorization_decide,
)
from .convexity import (
    BUILTIN_NAMES,
    Refuted,
    ScalarFunction,
    SupportCertificate,
    builtin_function,
    convexity_boundary,
    function_from_expression,
    jensen_at_point_verify,
    random_convexity_falsifier,
    support_line_certify,
)
from .inequalities import (
    JensenReport,
    SexticWitness,
    bnl_triplet_verify,
    borwein_girgensohn_verify,
    popoviciu_verify,
    popoviciu_witness,
    probabilistic_jensen_verify,
    witness_majorization_holds,
    xexp_weighted_jensen_verify,
)
from .spectra import (
    EigenDecomposition,
    LOWER_SPECTRUM,
    SymmetricMatrix,
    UPPER_SPECTRUM,
    jacobi_eigen,
    schur_horn_check,
    spectrum_in,
    trace_f,
    trace_inequality_verify,
)
from .polyroots import (
    ComplexPolynomial,
    critical_disc_radius,
    debruijn_springer_verify,
    derivative,
    gauss_lucas_check,
    malamud_majorization_check,
    relative_concavity_verify,
    roots,
)

__version__ = "0.1.0"
