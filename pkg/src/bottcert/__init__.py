"""Exact subequivalence of Bott line-bundle sums, with certified tower checks.

The package decides, by integer combinatorics alone, how many copies of
the trivial rank-one projection embed into a direct sum of tensor
products of Bott projections, simulates the finite stages of an
inductive system where those sums arise, encloses the governing series
in exact rational bounds, and emits machine-checkable certificates that
a scaled limit projection is not properly infinite.
"""

from .comparison import (
    DeficiencyWitness,
    brute_force_max_trivial,
    closed_form_max_trivial,
    is_trivial_subequivalent,
    max_trivial_multiple,
    maximum_matching,
)
from .errors import (
    BottcertError,
    BudgetExhaustedError,
    CertificateError,
    DepthTooSmallError,
    InadmissibleNError,
    InvalidFamilyError,
    NotDisjointError,
    ParameterError,
    SizeExceededError,
    StageRangeError,
)
from .euler import MultilinearPoly, max_transversal_size, max_trivial_by_euler, sdr_exists
from .projections import (
    CoordinateAllocator,
    DisjointFamilySummary,
    FormalProjection,
    canonical_coords,
)
from .tower import (
    ConnectingCounts,
    FanoutSequence,
    RationalInterval,
    StageData,
    Tower,
    TowerParams,
    decimal_approx,
    threshold_window,
)
from .verifier import (
    Certificate,
    ObstructionReport,
    StageRecord,
    TraceGrowthReport,
    check_certificate,
    choose_threshold,
    stable_matrix_obstruction,
    trace_growth,
    verify_not_properly_infinite,
)

__version__ = "0.1.0"

__all__ = [
    "BottcertError",
    "BudgetExhaustedError",
    "Certificate",
    "CertificateError",
    "ConnectingCounts",
    "CoordinateAllocator",
    "DeficiencyWitness",
    "DepthTooSmallError",
    "DisjointFamilySummary",
    "FanoutSequence",
    "FormalProjection",
    "InadmissibleNError",
    "InvalidFamilyError",
    "MultilinearPoly",
    "NotDisjointError",
    "ObstructionReport",
    "ParameterError",
    "RationalInterval",
    "SizeExceededError",
    "StageData",
    "StageRangeError",
    "StageRecord",
    "Tower",
    "TowerParams",
    "TraceGrowthReport",
    "brute_force_max_trivial",
    "canonical_coords",
    "check_certificate",
    "choose_threshold",
    "closed_form_max_trivial",
    "decimal_approx",
    "is_trivial_subequivalent",
    "max_transversal_size",
    "max_trivial_by_euler",
    "max_trivial_multiple",
    "maximum_matching",
    "sdr_exists",
    "stable_matrix_obstruction",
    "threshold_window",
    "trace_growth",
    "verify_not_properly_infinite",
    "__version__",
]
