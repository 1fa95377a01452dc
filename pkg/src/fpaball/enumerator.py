"""Streaming enumeration of the Chebyshev ball ``B(d, e)`` over ``S_n^lam``.

Symbols ``k = 1..m`` are placed in turn.  ``P`` holds the window offsets of the
positions that are still vacant and valid for ``k``; the actual positions are
``P + (k*lam - lam)``.  Offsets at or below ``-d*lam + lam`` are about to fall
out of range, so they must be filled by ``k`` itself.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .core import (
    BudgetExceeded,
    InternalInconsistency,
    Params,
    VACANT,
    bits_of,
    chebyshev_distance,
    check_frequency_permutation,
    colex_combinations,
    multiset_permutations,
    multiset_size,
)

Visitor = Callable[[memoryview], None]

DEFAULT_SCAN_BUDGET = 5_000_000


@dataclass
class EnumStats:
    visits: int = 0
    frames: int = 0
    # leaves reached with P != [d*lam + lam]; diagnostic only
    dead_leaves: int = 0
    claim_checks: int = 0
    extra: dict = field(default_factory=dict)


class _Ball:
    """Mutable enumeration state: the offset-indexed ``pi`` buffer and bookkeeping."""

    def __init__(self, params: Params, check_claims: bool, prune: bool = True):
        self.params = params
        self.prune = prune
        lam, d, n = params.lam, params.d, params.n
        self.lam = lam
        self.low = -d * lam + 1  # smallest window offset
        self.width = 2 * d * lam + lam
        # pi[i - low] is position i; positions run over [-d*lam + 1, n + d*lam]
        self.pi = array("l", [VACANT] * (n + 2 * d * lam))
        self.counts = [0] * (params.m + 2)
        self.check_claims = check_claims
        self.full = (1 << (d * lam + lam)) - 1 << (d * lam)  # [1, d*lam + lam]
        self.top = (1 << lam) - 1 << (2 * d * lam)  # [d*lam + 1, d*lam + lam]
        self.forced_zone = (1 << lam) - 1  # offsets <= -d*lam + lam
        self.stats = EnumStats()

    def offsets(self, mask: int) -> list[int]:
        return [b + self.low for b in bits_of(mask)]

    def position(self, offset: int, k: int) -> int:
        return offset + k * self.lam - self.lam

    def view(self) -> memoryview:
        start = -self.low + 1
        return memoryview(self.pi).toreadonly()[start : start + self.params.n]

    def fail(self, what: str, k: int, mask: int) -> None:
        raise InternalInconsistency(f"{what} violated at k={k}, P={self.offsets(mask)}")

    def check_entry(self, k: int, mask: int) -> None:
        """Claims on ``P`` at the start of a call for symbol ``k``."""
        self.stats.claim_checks += 1
        lam, d = self.lam, self.params.d
        if mask >> self.width:
            self.fail("P within window", k, mask)
        if mask.bit_count() != d * lam + lam:
            self.fail("|P| = d*lam + lam", k, mask)
        if mask & self.top != self.top:
            self.fail("max(P) = d*lam + lam", k, mask)
        got = self.offsets(mask)
        for off in got:
            if self.position(off, k) <= 0:
                self.fail("positions in P are positive", k, mask)
        if k > self.params.m:
            return
        # positive vacant valid positions are exactly P shifted
        expected = set()
        for off in range(self.low, d * lam + lam + 1):
            i = self.position(off, k)
            if i > 0 and self.pi[i - self.low] == VACANT:
                expected.add(off)
        if expected != set(got):
            self.fail("P traces the vacant valid positions", k, mask)

    def check_progress(self, k: int) -> None:
        self.stats.claim_checks += 1
        for j in range(1, k + 1):
            if self.counts[j] != self.lam:
                raise InternalInconsistency(
                    f"symbol {j} appears {self.counts[j]} times before placing {k + 1}"
                )

    def choices(self, mask: int, k: int) -> Iterator[int]:
        """Each admissible ``X`` (as a mask) for the partition of ``P``."""
        forced = mask & self.forced_zone
        r = forced.bit_count()
        if r > self.lam:
            return
        free = bits_of(mask & ~forced)
        if self.prune:
            # a symbol beyond position n leaves a hole in [1, n]: no output below
            limit = self.params.n - (k * self.lam - self.lam) - self.low
            free = [b for b in free if b <= limit]
        for combo in colex_combinations(len(free), self.lam - r):
            x = forced
            for c in combo:
                x |= 1 << free[c]
            yield x

    def assign(self, x: int, k: int, symbol: int) -> None:
        # buffer index of offset bit b is b + k*lam - lam
        base = k * self.lam - self.lam
        for b in bits_of(x):
            self.pi[b + base] = symbol
        self.counts[k] += self.lam if symbol else -self.lam


def _run(ball: _Ball, visitor: Visitor | None, budget: int | None) -> int:
    params = ball.params
    m, lam = params.m, ball.lam
    stats = ball.stats
    stack: list[tuple[int, int, Iterator[int], int]] = []

    def enter(k: int, mask: int) -> None:
        stats.frames += 1
        if ball.check_claims:
            ball.check_entry(k, mask)
        stack.append((k, mask, ball.choices(mask, k), 0))

    enter(1, ball.full)
    while stack:
        k, mask, it, placed = stack[-1]
        if k > m:
            stack.pop()
            if mask == ball.full:
                if budget is not None and stats.visits >= budget:
                    raise BudgetExceeded(f"visit budget {budget} exceeded")
                stats.visits += 1
                if visitor is not None:
                    visitor(ball.view())
            else:
                stats.dead_leaves += 1
            continue
        if placed:
            ball.assign(placed, k, VACANT)
        x = next(it, None)
        if x is None:
            stack.pop()
            continue
        stack[-1] = (k, mask, it, x)
        ball.assign(x, k, k)
        if ball.check_claims:
            ball.check_progress(k)
        enter(k + 1, ((mask & ~x) >> lam) | ball.top)
    return stats.visits


def enum_ball(
    params: Params,
    visitor: Visitor | None = None,
    budget: int | None = None,
    check_claims: bool = False,
    stats: EnumStats | None = None,
    prune: bool = True,
) -> int:
    """Visit every ``pi`` with ``d_max(pi, e) <= d`` exactly once; return the count.

    The visitor receives a read-only ``memoryview`` over the internal buffer, valid
    only for the duration of the call.  Partitions are tried in colex order of the
    free choices, which fixes the visit order.  With ``check_claims`` the
    structural invariants of the search are verified at every frame and a
    violation raises :class:`InternalInconsistency`.

    ``prune`` skips choices that put a symbol past position ``n``; such branches
    can only end in leaves that produce nothing, so the visits are unchanged.
    With ``prune=False`` every partition is explored and the unproductive leaves
    are counted in ``stats.dead_leaves``.
    """
    ball = _Ball(params, check_claims, prune)
    if stats is not None:
        ball.stats = stats
    return _run(ball, visitor, budget)


def iter_ball(params: Params, budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """Materialising convenience wrapper around :func:`enum_ball`."""
    out: list[tuple[int, ...]] = []
    enum_ball(params, lambda v: out.append(tuple(v)), budget=budget)
    return iter(out)


def count_ball_bruteforce(params: Params, budget: int | None = None) -> int:
    return enum_ball(params, None, budget=budget)


def ball_membership(pi, center, d: int) -> bool:
    return chebyshev_distance(pi, center) <= d


def count_ball_centered(
    params: Params, center, budget: int | None = DEFAULT_SCAN_BUDGET
) -> int:
    """Count ``rho`` within distance ``d`` of ``center`` by scanning all of ``S_n^lam``."""
    center = check_frequency_permutation(center, params)
    if budget is not None and multiset_size(params) > budget:
        raise BudgetExceeded(
            f"exhaustive scan of {multiset_size(params)} permutations exceeds budget {budget}"
        )
    d = params.d
    return sum(1 for rho in multiset_permutations(params) if chebyshev_distance(rho, center) <= d)


__all__ = [
    "EnumStats",
    "ball_membership",
    "count_ball_bruteforce",
    "count_ball_centered",
    "enum_ball",
    "iter_ball",
]
