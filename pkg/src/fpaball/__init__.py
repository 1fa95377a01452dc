"""Exact sizes of Chebyshev balls over frequency permutations."""

from .bounds import BoundReport, bound_report, gv_lower_bound, sphere_packing_upper_bound
from .core import (
    BudgetExceeded,
    DimensionMismatch,
    FpaBallError,
    IndexOutOfRange,
    InternalInconsistency,
    InvalidParameter,
    Limits,
    MemoryBudgetExceeded,
    OrderLimitExceeded,
    Params,
    ResourceLimitExceeded,
    StateWidthExceeded,
    UnsupportedFormat,
    VACANT,
    WindowSubset,
    chebyshev_distance,
    identity_perm,
    make_params,
    multiset_size,
    rank_subset,
    shift_set,
    unrank_subset,
)
from .engine import (
    CountResult,
    count,
    count_auto,
    count_iterative,
    count_matrix_power,
    iterate_ball_sizes,
    mat_mul,
    mat_pow,
)
from .enumerator import (
    ball_membership,
    count_ball_bruteforce,
    count_ball_centered,
    enum_ball,
)
from .graph import build_adjacency, export_graph, out_degree, out_edges, vertices
from .permanent import build_ball_matrix, count_via_permanent, permanent_ryser

__version__ = "0.1.0"
