"""Counting ``V_inf(lam, n, d)`` as closed walks on the transfer graph.

Two production methods:

* :func:`count_matrix_power` raises the dense adjacency matrix to the ``m``-th
  power by repeated squaring and reads entry ``(0, 0)``.
* :func:`count_iterative` applies the adjacency operator ``m`` times to the unit
  vector, regenerating the edges on every round so that only ``O(N)`` state is
  kept, ``N = C(2*d*lam, d*lam)``.

The iterative method vectorises edge generation with numpy.  Vector entries are
exact nonnegative integers held as little-endian limbs of ``B`` bits in
``uint64`` words, where ``B`` leaves enough headroom that summing one full
out-neighbourhood never overflows a word.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import graph
from .core import (
    DEFAULT_LIMITS,
    DimensionMismatch,
    InvalidParameter,
    Limits,
    MemoryBudgetExceeded,
    Params,
    check_state_width,
    subset_count,
)

METHODS = ("enumeration", "permanent", "matrix-power", "iterative")
METHOD_ALIASES = {"enum": "enumeration", "enumeration": "enumeration", "permanent": "permanent",
                  "matrix-power": "matrix-power", "iterative": "iterative"}

# above this state width the mask -> index map is a binary search, not a table
LOOKUP_TABLE_MAX_WIDTH = 22


@dataclass
class CountResult:
    value: int
    method: str
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# dense matrices


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def mat_mul(a, b) -> np.ndarray:
    """Exact product of two square integer matrices (object arrays of ints)."""
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"orders differ: {a.shape[0]} != {b.shape[0]}")
    size = a.shape[0]
    if size == 0:
        return a.copy()
    bound = int(abs(a).max()) * int(abs(b).max()) * size
    # every partial sum is an integer below the bound, so these paths are exact
    if bound < 2**53:
        prod = (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    elif bound < 2**63:
        prod = a.astype(np.int64) @ b.astype(np.int64)
    else:
        return a.dot(b)
    out = np.empty((size, size), dtype=object)
    out[:] = prod.tolist()
    return out


def identity_matrix(size: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=object)
    out[:] = 0
    for i in range(size):
        out[i, i] = 1
    return out


def mat_pow(a, e: int, stats: dict | None = None) -> np.ndarray:
    """``a**e`` by left-to-right binary exponentiation.

    Uses ``floor(log2 e) + popcount(e) - 1`` multiplications for ``e >= 1``.
    """
    a = _as_matrix(a)
    if e < 0:
        raise InvalidParameter(f"exponent must be nonnegative, got {e}")
    mults = 0
    if e == 0:
        result = identity_matrix(a.shape[0])
    else:
        result = a
        for bit in bin(e)[3:]:
            result = mat_mul(result, result)
            mults += 1
            if bit == "1":
                result = mat_mul(result, a)
                mults += 1
    if stats is not None:
        stats["matrix_multiplications"] = mults
    return result


def expected_multiplications(m: int) -> int:
    return m.bit_length() - 1 + bin(m).count("1") - 1


def estimate_matrix_bytes(lam: int, d: int, m: int) -> int:
    """Rough peak footprint of powering the adjacency matrix to ``m``.

    Three live matrices of ``N**2`` Python ints whose width grows to about
    ``m * log2(max out-degree)`` bits.
    """
    size = subset_count(lam, d)
    bits = m * math.log2(max(graph.max_out_degree(lam, d), 2))
    return int(3 * size * size * (32 + bits / 8))


def _trivial(params: Params) -> bool:
    return params.d == 0 or params.m == 1


def count_matrix_power(params: Params, limits: Limits = DEFAULT_LIMITS) -> CountResult:
    t0 = time.perf_counter()
    stats: dict = {}
    if _trivial(params):
        stats.update(vertex_count=subset_count(params.lam, params.d), matrix_multiplications=0)
        return CountResult(1, "matrix-power", _finish(stats, t0))
    lam, d = params.lam, params.d
    check_state_width(lam, d, limits)
    need = estimate_matrix_bytes(lam, d, params.m)
    if need > limits.memory_budget:
        raise MemoryBudgetExceeded(
            f"matrix power needs about {need} bytes, budget is {limits.memory_budget}"
        )
    a = graph.build_adjacency(lam, d, limits)
    power = mat_pow(a, params.m, stats)
    stats["vertex_count"] = a.shape[0]
    return CountResult(int(power[0, 0]), "matrix-power", _finish(stats, t0))


def _finish(stats: dict, t0: float) -> dict:
    stats["wall_time"] = time.perf_counter() - t0
    return stats


# ---------------------------------------------------------------------------
# iterative vector method


def _lowest_bit(x: np.ndarray) -> np.ndarray:
    return x & (~x + np.uint64(1))


class _Group:
    """Vertices sharing the same forced count ``r``."""

    def __init__(self, index: np.ndarray, q: np.ndarray, lam: int, r: int):
        self.index = index
        self.need = lam - r
        forced = q & np.uint64((1 << lam) - 1)
        self.base = q - forced
        free = self.base.copy()
        # one contiguous array per free slot, ascending bit order
        self.free = []
        for _ in range(int(np.bitwise_count(free[0])) if len(free) else 0):
            low = _lowest_bit(free)
            self.free.append(low)
            free ^= low

    def __len__(self) -> int:
        return len(self.index)

    @property
    def out_degree(self) -> int:
        return math.comb(len(self.free), self.need)

    @property
    def nbytes(self) -> int:
        return self.index.nbytes + self.base.nbytes + sum(c.nbytes for c in self.free)


class IterativeSweep:
    """Round-by-round evaluation of ``A_H^k x`` for ``k = 1, 2, ...``.

    Holds the current vector plus per-vertex data linear in ``N``; the edges of
    ``H`` are recomputed on every round and never stored.
    """

    def __init__(self, lam: int, d: int, limits: Limits = DEFAULT_LIMITS):
        check_state_width(lam, d, limits)
        if d < 1:
            raise InvalidParameter("the transfer graph needs d >= 1")
        self.lam, self.d = lam, d
        width = 2 * d * lam
        masks = np.array(graph.vertex_masks(lam, d), dtype=np.uint64)
        self.size = len(masks)
        self.shift = np.uint64(lam)
        self.limb_bits = 64 - graph.max_out_degree(lam, d).bit_length()
        self.limb_mask = np.uint64((1 << self.limb_bits) - 1)

        if width <= LOOKUP_TABLE_MAX_WIDTH:
            self._table = np.full(1 << width, -1, dtype=np.intp)
            self._table[masks.astype(np.intp)] = np.arange(self.size, dtype=np.intp)
            self._ascending = None
        else:
            self._table = None
            self._ascending = masks[::-1].copy()

        q = masks | np.uint64(((1 << lam) - 1) << width)
        forced_count = np.bitwise_count(masks & np.uint64((1 << lam) - 1))
        self.groups = []
        for r in range(min(lam, d * lam) + 1):
            sel = np.flatnonzero(forced_count == r)
            if len(sel):
                self.groups.append(_Group(sel, q[sel], lam, r))

        self.vector = np.zeros((self.size, 1), dtype=np.uint64)
        self.vector[0, 0] = 1
        self.rounds = 0
        self.edges_traversed = 0
        self.peak_state_bytes = self.state_bytes()

    def state_bytes(self) -> int:
        table = self._table if self._table is not None else self._ascending
        return self.vector.nbytes + table.nbytes + sum(g.nbytes for g in self.groups)

    def _accumulate(self, group: _Group, acc: np.ndarray) -> int:
        """Add ``y[dst]`` into ``acc`` for every edge of the group; return scratch bytes."""
        y = self.vector
        size = len(group)
        partial = [np.empty(size, np.uint64) for _ in range(group.need + 1)]
        np.copyto(partial[0], group.base)
        dst = np.empty(size, np.uint64)
        idx = np.empty(size, np.intp)
        rows = np.empty_like(acc)
        free = group.free
        need = group.need

        def leaf(removed: np.ndarray) -> None:
            np.right_shift(removed, self.shift, out=dst)
            if self._table is not None:
                np.take(self._table, dst.view(np.int64), out=idx)
            else:
                pos = np.searchsorted(self._ascending, dst)
                np.subtract(self.size - 1, pos, out=idx)
            np.take(y, idx, axis=0, out=rows)
            np.add(acc, rows, out=acc)

        # partial[t] is base with t chosen free elements removed
        def rec(start: int, depth: int) -> None:
            if depth == need:
                leaf(partial[depth])
                return
            for s in range(start, len(free) - (need - depth) + 1):
                np.subtract(partial[depth], free[s], out=partial[depth + 1])
                rec(s + 1, depth + 1)

        rec(0, 0)
        return sum(a.nbytes for a in partial) + dst.nbytes + idx.nbytes + rows.nbytes

    def step(self) -> int:
        """Advance one round; return entry 0 of the new vector."""
        limbs = self.vector.shape[1]
        new = np.zeros((self.size, limbs), dtype=np.uint64)
        transient = 0
        for group in self.groups:
            acc = np.zeros((len(group), limbs), dtype=np.uint64)
            scratch = self._accumulate(group, acc)
            new[group.index] = acc
            transient = max(transient, scratch + acc.nbytes)
            self.edges_traversed += len(group) * group.out_degree
        self.vector = self._normalize(new)
        self.rounds += 1
        self.peak_state_bytes = max(
            self.peak_state_bytes, self.state_bytes() + new.nbytes + transient
        )
        return self.value(0)

    def _normalize(self, v: np.ndarray) -> np.ndarray:
        bits = np.uint64(self.limb_bits)
        cols = [v[:, j].copy() for j in range(v.shape[1])]
        j = 0
        while j < len(cols):
            carry = cols[j] >> bits
            if carry.any():
                cols[j] &= self.limb_mask
                if j + 1 == len(cols):
                    cols.append(carry)
                else:
                    cols[j + 1] += carry
            j += 1
        return np.ascontiguousarray(np.stack(cols, axis=1))

    def value(self, i: int) -> int:
        out = 0
        for j, limb in enumerate(self.vector[i].tolist()):
            out |= int(limb) << (j * self.limb_bits)
        return out

    def values(self) -> list[int]:
        return [self.value(i) for i in range(self.size)]


def iterate_ball_sizes(
    lam: int, d: int, m_max: int, limits: Limits = DEFAULT_LIMITS
) -> Iterator[tuple[int, int]]:
    """Yield ``(m, V_inf(lam, lam*m, d))`` for ``m = 1..m_max`` in one sweep."""
    if d == 0:
        for m in range(1, m_max + 1):
            yield m, 1
        return
    sweep = IterativeSweep(lam, d, limits)
    for m in range(1, m_max + 1):
        yield m, sweep.step()


def estimate_iterative_bytes(lam: int, d: int, m: int) -> int:
    """Rough peak footprint of the iterative method: linear in the vertex count."""
    size = subset_count(lam, d)
    degree = graph.max_out_degree(lam, d)
    limbs = 1 + int(m * math.log2(max(degree, 2))) // (64 - degree.bit_length())
    table = 8 << (2 * d * lam) if 2 * d * lam <= LOOKUP_TABLE_MAX_WIDTH else 0
    return size * 8 * (4 * limbs + 2 * (d * lam + lam) + 4) + table


def count_iterative(params: Params, limits: Limits = DEFAULT_LIMITS) -> CountResult:
    t0 = time.perf_counter()
    if _trivial(params):
        stats = {"vertex_count": subset_count(params.lam, params.d), "rounds": 0,
                 "edges_traversed": 0}
        return CountResult(1, "iterative", _finish(stats, t0))
    check_state_width(params.lam, params.d, limits)
    need = estimate_iterative_bytes(params.lam, params.d, params.m)
    if need > limits.memory_budget:
        raise MemoryBudgetExceeded(
            f"iterative method needs about {need} bytes, budget is {limits.memory_budget}"
        )
    sweep = IterativeSweep(params.lam, params.d, limits)
    value = 0
    for _ in range(params.m):
        value = sweep.step()
    stats = {
        "vertex_count": sweep.size,
        "rounds": sweep.rounds,
        "edges_traversed": sweep.edges_traversed,
        "limbs": sweep.vector.shape[1],
        "peak_state_bytes": sweep.peak_state_bytes,
    }
    return CountResult(value, "iterative", _finish(stats, t0))


# ---------------------------------------------------------------------------
# front door


def choose_method(params: Params, limits: Limits = DEFAULT_LIMITS) -> str:
    """Pick matrix-power or iterative by a simple cost model."""
    lam, d, m = params.lam, params.d, params.m
    if _trivial(params):
        return "iterative"
    check_state_width(lam, d, limits)
    if estimate_matrix_bytes(lam, d, m) > limits.memory_budget:
        return "iterative"
    size = subset_count(lam, d)
    matrix_cost = size**3 * max(expected_multiplications(m), 1)
    iterative_cost = graph.edge_count(lam, d) * m
    return "matrix-power" if matrix_cost < iterative_cost else "iterative"


def count(params: Params, method: str = "auto", limits: Limits = DEFAULT_LIMITS) -> CountResult:
    """Compute the ball size with the named method (``auto`` picks one)."""
    if method == "auto":
        method = choose_method(params, limits)
    try:
        method = METHOD_ALIASES[method]
    except KeyError:
        raise InvalidParameter(f"unknown method {method!r}") from None
    if method == "matrix-power":
        return count_matrix_power(params, limits)
    if method == "iterative":
        return count_iterative(params, limits)
    t0 = time.perf_counter()
    if method == "permanent":
        from .permanent import count_via_permanent

        return CountResult(count_via_permanent(params, limits), "permanent", _finish({}, t0))
    from .enumerator import count_ball_bruteforce

    return CountResult(count_ball_bruteforce(params), "enumeration", _finish({}, t0))


def count_auto(params: Params, limits: Limits = DEFAULT_LIMITS) -> CountResult:
    return count(params, "auto", limits)
