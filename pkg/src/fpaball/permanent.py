"""Ball sizes from the permanent of the 0-1 band matrix ``A^(lam, n, d)``.

``(lam!)^m * V_inf(lam, n, d) = perm(A)`` with ``a_ij = 1`` iff
``|ceil(i/lam) - ceil(j/lam)| <= d``.  Independent of the transfer-graph code.
"""

from __future__ import annotations

import math
from typing import Sequence

from .core import (
    DEFAULT_LIMITS,
    DimensionMismatch,
    InternalInconsistency,
    Limits,
    OrderLimitExceeded,
    Params,
)


def build_ball_matrix(params: Params) -> list[list[int]]:
    lam, n, d = params.lam, params.n, params.d
    block = [(i + lam - 1) // lam for i in range(1, n + 1)]
    return [[1 if abs(bi - bj) <= d else 0 for bj in block] for bi in block]


def permanent_ryser(matrix: Sequence[Sequence[int]], limit: int | None = None) -> int:
    """Exact permanent by Ryser's formula, visiting column subsets in Gray order.

    ``perm(A) = (-1)^n * sum_S (-1)^|S| prod_i sum_{j in S} a_ij``.  Each Gray
    step toggles one column, so the row sums are updated in ``O(n)``.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DimensionMismatch("permanent needs a square matrix")
    if limit is None:
        limit = DEFAULT_LIMITS.permanent_order
    if n > limit:
        raise OrderLimitExceeded(f"matrix order {n} exceeds permanent limit {limit}")
    if n == 0:
        return 1
    columns = [[int(matrix[i][j]) for i in range(n)] for j in range(n)]
    sums = [0] * n
    in_set = [False] * n
    total = 0
    sign = 1  # (-1)^|S| for the current subset
    for g in range(1, 1 << n):
        j = (g & -g).bit_length() - 1
        col = columns[j]
        if in_set[j]:
            for i in range(n):
                sums[i] -= col[i]
        else:
            for i in range(n):
                sums[i] += col[i]
        in_set[j] = not in_set[j]
        sign = -sign
        prod = 1
        for s in sums:
            if not s:
                prod = 0
                break
            prod *= s
        if prod:
            total += prod if sign > 0 else -prod
    return -total if n % 2 else total


def count_via_permanent(params: Params, limits: Limits = DEFAULT_LIMITS) -> int:
    matrix = build_ball_matrix(params)
    perm = permanent_ryser(matrix, limits.permanent_order)
    scale = math.factorial(params.lam) ** params.m
    value, rest = divmod(perm, scale)
    if rest:
        raise InternalInconsistency(
            f"perm(A) = {perm} is not divisible by (lambda!)^m = {scale}"
        )
    return value
