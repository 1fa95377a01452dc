"""Parameters, permutation primitives and window-subset encoding.

Window values ``v`` in ``[-d*lam + 1, d*lam + lam]`` are stored as bit
``v + d*lam - 1`` of a plain ``int``.  Vertices of the transfer graph use the
low ``2*d*lam`` bits only.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

VACANT = 0

DEFAULT_STATE_WIDTH_LIMIT = 30
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
DEFAULT_PERMANENT_LIMIT = 24


class FpaBallError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(FpaBallError, ValueError):
    pass


class DimensionMismatch(FpaBallError, ValueError):
    pass


class IndexOutOfRange(FpaBallError, IndexError):
    pass


class UnsupportedFormat(FpaBallError, ValueError):
    pass


class ResourceLimitExceeded(FpaBallError):
    """A configured size limit would be exceeded."""


class StateWidthExceeded(ResourceLimitExceeded):
    pass


class MemoryBudgetExceeded(ResourceLimitExceeded):
    pass


class OrderLimitExceeded(ResourceLimitExceeded):
    pass


class BudgetExceeded(ResourceLimitExceeded):
    pass


class InternalInconsistency(FpaBallError, RuntimeError):
    """An identity that must hold exactly did not; the implementation is wrong."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get("FPABALL_" + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"FPABALL_{name} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Limits:
    state_width: int = DEFAULT_STATE_WIDTH_LIMIT
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    permanent_order: int = DEFAULT_PERMANENT_LIMIT

    @classmethod
    def from_env(cls) -> "Limits":
        """Read ``FPABALL_STATE_WIDTH_LIMIT`` etc., falling back to the defaults."""
        return cls(
            state_width=_env_int("STATE_WIDTH_LIMIT", DEFAULT_STATE_WIDTH_LIMIT),
            memory_budget=_env_int("MEMORY_BUDGET", DEFAULT_MEMORY_BUDGET),
            permanent_order=_env_int("PERMANENT_LIMIT", DEFAULT_PERMANENT_LIMIT),
        )


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Params:
    """Frequency ``lam``, alphabet size ``m`` and radius ``d``; ``n = m * lam``."""

    lam: int
    m: int
    d: int

    @property
    def n(self) -> int:
        return self.m * self.lam

    @property
    def width(self) -> int:
        """Number of bits of a transfer-graph state, ``2*d*lam``."""
        return 2 * self.d * self.lam


def _check_int(name: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}")
    return value


def make_params(lam: int, m: int, d: int) -> Params:
    lam = _check_int("lambda", lam)
    m = _check_int("m", m)
    d = _check_int("d", d)
    if lam < 1:
        raise InvalidParameter(f"lambda must be positive, got {lam}")
    if m < 1:
        raise InvalidParameter(f"m must be positive, got {m}")
    if d < 0:
        raise InvalidParameter(f"d must be nonnegative, got {d}")
    return Params(lam, m, d)


def check_state_width(lam: int, d: int, limits: Limits = DEFAULT_LIMITS) -> None:
    if 2 * d * lam > limits.state_width:
        raise StateWidthExceeded(
            f"state width 2*d*lambda = {2 * d * lam} exceeds limit {limits.state_width}"
        )


# ---------------------------------------------------------------------------
# binomials


@lru_cache(maxsize=None)
def pascal(rows: int) -> tuple[tuple[int, ...], ...]:
    """Rows ``0..rows`` of Pascal's triangle, each padded to ``rows + 1`` entries."""
    table = []
    row = [1] + [0] * rows
    for _ in range(rows + 1):
        table.append(tuple(row))
        row = [1] + [row[j - 1] + row[j] for j in range(1, rows + 1)]
    return tuple(table)


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    if n <= 2 * DEFAULT_STATE_WIDTH_LIMIT:
        return pascal(2 * DEFAULT_STATE_WIDTH_LIMIT)[n][k]
    return math.comb(n, k)


def multiset_size(params: Params) -> int:
    """``|S_n^lam| = n! / (lam!)^m``."""
    return math.factorial(params.n) // math.factorial(params.lam) ** params.m


def colex_combinations(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All ``k``-subsets of ``range(n)`` as increasing tuples, in colex order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for head in colex_combinations(top, k - 1):
            yield head + (top,)


def bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# permutations and distance


def identity_perm(params: Params) -> tuple[int, ...]:
    lam = params.lam
    return tuple((i + lam - 1) // lam for i in range(1, params.n + 1))


def is_frequency_permutation(entries: Sequence[int], params: Params) -> bool:
    if len(entries) != params.n:
        return False
    counts = [0] * (params.m + 1)
    for s in entries:
        if isinstance(s, bool) or not isinstance(s, int) or not 1 <= s <= params.m:
            return False
        counts[s] += 1
    return all(c == params.lam for c in counts[1:])


def check_frequency_permutation(entries: Sequence[int], params: Params) -> tuple[int, ...]:
    if len(entries) != params.n:
        raise DimensionMismatch(f"expected length {params.n}, got {len(entries)}")
    if not is_frequency_permutation(entries, params):
        raise InvalidParameter(
            f"{tuple(entries)} is not a frequency permutation with lambda={params.lam}, m={params.m}"
        )
    return tuple(entries)


def chebyshev_distance(x: Sequence[int | None], y: Sequence[int | None]) -> int:
    """Max ``|x_i - y_i|`` over positions where neither entry is vacant."""
    if len(x) != len(y):
        raise DimensionMismatch(f"lengths differ: {len(x)} != {len(y)}")
    best = 0
    for a, b in zip(x, y):
        if a is None or b is None or a == VACANT or b == VACANT:
            continue
        diff = abs(a - b)
        if diff > best:
            best = diff
    return best


def shift_set(s: Iterable[int], z: int) -> frozenset[int]:
    return frozenset(v + z for v in s)


def multiset_permutations(params: Params) -> Iterator[tuple[int, ...]]:
    """Every element of ``S_n^lam`` in lexicographic order."""
    n, m = params.n, params.m
    remaining = [params.lam] * (m + 1)
    remaining[0] = 0
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for s in range(1, m + 1):
            if remaining[s]:
                remaining[s] -= 1
                prefix.append(s)
                yield from rec()
                prefix.pop()
                remaining[s] += 1

    return rec()


# ---------------------------------------------------------------------------
# window subsets


@dataclass(frozen=True)
class WindowSubset:
    """A subset of ``[-d*lam + 1, d*lam]`` stored as a ``2*d*lam``-bit mask."""

    lam: int
    d: int
    mask: int

    @classmethod
    def from_members(cls, members: Iterable[int], lam: int, d: int) -> "WindowSubset":
        lo, hi = -d * lam + 1, d * lam
        mask = 0
        for v in members:
            if not lo <= v <= hi:
                raise IndexOutOfRange(f"{v} is outside the window [{lo}, {hi}]")
            mask |= 1 << (v + d * lam - 1)
        return cls(lam, d, mask)

    @property
    def members(self) -> tuple[int, ...]:
        offset = self.d * self.lam - 1
        return tuple(b - offset for b in bits_of(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def subset_count(lam: int, d: int) -> int:
    return binom(2 * d * lam, d * lam)


def rank_subset(s: WindowSubset) -> int:
    """Colex rank of ``s`` among the ``d*lam``-subsets of its window."""
    k = s.d * s.lam
    if len(s) != k:
        raise IndexOutOfRange(f"subset has {len(s)} members, expected {k}")
    return sum(binom(b, j + 1) for j, b in enumerate(bits_of(s.mask)))


def unrank_subset(index: int, lam: int, d: int) -> WindowSubset:
    k = d * lam
    if not 0 <= index < subset_count(lam, d):
        raise IndexOutOfRange(f"rank {index} out of range for lambda={lam}, d={d}")
    mask = 0
    for j in range(k, 0, -1):
        b = j - 1
        while binom(b + 1, j) <= index:
            b += 1
        index -= binom(b, j)
        mask |= 1 << b
    return WindowSubset(lam, d, mask)
