"""Neurovariety dimensions of polynomial neural networks over prime fields.

Computes generic Jacobian ranks (certified dimension lower bounds), recursive
upper bounds, filling / minimal-filling certificates, and runs frontier and
exhaustive searches for minimal filling architectures.  Hot kernels run on a
compiled extension when available (`neurodim.BACKEND` tells which one).
"""

from ._kernel import BACKEND
from .algebra import (
    DEFAULT_PRIME,
    DualElement,
    FieldElement,
    HomPoly,
    MonomialBasis,
    Prime,
    field_inv,
    is_prime,
    monomial_basis,
    poly_linear_combination,
    poly_mul,
    poly_pow,
)
from .bounds import (
    DimensionFact,
    FactsRegistry,
    bound_with_derivation,
    certify_nonfilling,
    merge_fact,
    recursive_bound,
)
from .certify import (
    DefectReport,
    MfaCertificate,
    TableReport,
    certify_mfa,
    defect_report,
    reproduce_table,
)
from .errors import (
    BasisMismatch,
    DegreeOverflow,
    EnumerationTooLarge,
    InconsistentFacts,
    NeurodimError,
    ShapeError,
    SmallPrimeWarning,
)
from .pnn import (
    Architecture,
    CoefficientVector,
    WeightAssignment,
    ambient_dim,
    expected_dim,
    format_architecture,
    forward,
    is_unimodal,
    param_bound,
    param_count,
    parse_architecture,
)
from .rank import (
    RankEstimate,
    generic_rank,
    jacobian_at,
    jacobian_by_dual_seeds,
    matrix_rank,
)
from .search import (
    Antichain,
    SearchConfig,
    SearchResult,
    exhaustive_search,
    frontier_search,
    implied_filling,
    implied_nonfilling,
)

__version__ = "0.1.0"
