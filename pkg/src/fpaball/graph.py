"""The transfer graph ``H(lam, d)`` and its layered unrolling ``G(lam, n, d)``.

A vertex is a ``d*lam``-subset ``P`` of ``[-d*lam + 1, d*lam]``.  Its successors
come from adding the ``lam`` fresh offsets ``[d*lam + 1, d*lam + lam]``, removing
a ``lam``-subset ``X`` that contains every offset ``<= -d*lam + lam``, and
shifting down by ``lam``.

Vertex indices put ``{1, ..., d*lam}`` first: index ``i`` is the subset of colex
rank ``N - 1 - i``, so ascending index is descending mask value.
"""

from __future__ import annotations

import json
from typing import Iterator

import numpy as np

from .core import (
    DEFAULT_LIMITS,
    DimensionMismatch,
    Limits,
    MemoryBudgetExceeded,
    UnsupportedFormat,
    WindowSubset,
    binom,
    bits_of,
    check_state_width,
    colex_combinations,
    rank_subset,
    subset_count,
    unrank_subset,
)


def vertex_index(s: WindowSubset) -> int:
    return subset_count(s.lam, s.d) - 1 - rank_subset(s)


def vertex_at(index: int, lam: int, d: int) -> WindowSubset:
    return unrank_subset(subset_count(lam, d) - 1 - index, lam, d)


def start_vertex(lam: int, d: int) -> WindowSubset:
    """``{1, ..., d*lam}``, always at index 0."""
    k = d * lam
    return WindowSubset(lam, d, ((1 << k) - 1) << k)


def vertex_masks(lam: int, d: int) -> list[int]:
    """Masks of all vertices in index order, without building subset objects."""
    k, w = d * lam, 2 * d * lam
    masks = [sum(1 << b for b in combo) for combo in colex_combinations(w, k)]
    masks.reverse()
    return masks


def vertices(lam: int, d: int, limits: Limits = DEFAULT_LIMITS) -> Iterator[WindowSubset]:
    check_state_width(lam, d, limits)
    for mask in vertex_masks(lam, d):
        yield WindowSubset(lam, d, mask)


def _check_vertex(lam: int, d: int, p: WindowSubset) -> None:
    if (p.lam, p.d) != (lam, d):
        raise DimensionMismatch(f"vertex built for lambda={p.lam}, d={p.d}")
    if len(p) != d * lam:
        raise DimensionMismatch(f"vertex must have {d * lam} members, got {len(p)}")


def out_edge_masks(lam: int, d: int, mask: int) -> Iterator[int]:
    """Destination masks of the edges leaving ``mask``, colex order of free choices."""
    q = mask | ((1 << lam) - 1) << (2 * d * lam)
    forced = q & ((1 << lam) - 1)
    r = forced.bit_count()
    if r > lam:
        return
    free = bits_of(q & ~forced)
    for combo in colex_combinations(len(free), lam - r):
        x = forced
        for c in combo:
            x |= 1 << free[c]
        yield (q & ~x) >> lam


def out_edges(
    lam: int, d: int, p: WindowSubset, limits: Limits = DEFAULT_LIMITS
) -> Iterator[WindowSubset]:
    check_state_width(lam, d, limits)
    _check_vertex(lam, d, p)
    for dst in out_edge_masks(lam, d, p.mask):
        yield WindowSubset(lam, d, dst)


def forced_count(lam: int, d: int, mask: int) -> int:
    """Members of the vertex lying in ``[-d*lam + 1, -d*lam + lam]``."""
    return (mask & ((1 << lam) - 1)).bit_count()


def out_degree(lam: int, d: int, p: WindowSubset) -> int:
    r = forced_count(lam, d, p.mask)
    if r > lam:
        return 0
    return binom(d * lam + lam - r, lam - r)


def edge_count(lam: int, d: int) -> int:
    """``|E_H|`` from the out-degree formula, grouped by forced count."""
    k, w = d * lam, 2 * d * lam
    return sum(
        binom(lam, r) * binom(w - lam, k - r) * binom(k + lam - r, lam - r)
        for r in range(min(lam, k) + 1)
    )


def max_out_degree(lam: int, d: int) -> int:
    return binom(d * lam + lam, lam)


def iter_edges(lam: int, d: int, limits: Limits = DEFAULT_LIMITS) -> Iterator[tuple[int, int]]:
    """All edges as ``(source index, destination index)`` pairs."""
    check_state_width(lam, d, limits)
    masks = vertex_masks(lam, d)
    index = {mask: i for i, mask in enumerate(masks)}
    for i, mask in enumerate(masks):
        for dst in out_edge_masks(lam, d, mask):
            yield i, index[dst]


def build_adjacency(lam: int, d: int, limits: Limits = DEFAULT_LIMITS) -> np.ndarray:
    """Dense 0/1 adjacency matrix as an object array of Python ints."""
    check_state_width(lam, d, limits)
    size = subset_count(lam, d)
    # at least one machine word per entry, before any powering
    if size * size * 8 > limits.memory_budget:
        raise MemoryBudgetExceeded(
            f"{size}x{size} adjacency matrix exceeds memory budget {limits.memory_budget}"
        )
    a = np.zeros((size, size), dtype=object)
    a[:] = 0
    for i, j in iter_edges(lam, d, limits):
        a[i, j] = 1
    return a


# ---------------------------------------------------------------------------
# export


def _h_view(lam: int, d: int, limits: Limits) -> dict:
    check_state_width(lam, d, limits)
    nodes = [
        {"id": i, "members": list(WindowSubset(lam, d, mask).members)}
        for i, mask in enumerate(vertex_masks(lam, d))
    ]
    return {
        "view": "H",
        "lambda": lam,
        "d": d,
        "nodes": nodes,
        "edges": [list(e) for e in iter_edges(lam, d, limits)],
    }


def _g_view(lam: int, d: int, m: int, limits: Limits) -> dict:
    h = _h_view(lam, d, limits)
    size = len(h["nodes"])
    nodes = []
    for k in range(1, m + 2):
        for node in h["nodes"]:
            nodes.append({"id": (k - 1) * size + node["id"], "layer": k, "members": node["members"]})
    edges = []
    for k in range(1, m + 1):
        for i, j in h["edges"]:
            edges.append([(k - 1) * size + i, k * size + j])
    return {"view": "G", "lambda": lam, "d": d, "m": m, "layers": m + 1, "nodes": nodes, "edges": edges}


def _label(members: list[int]) -> str:
    return "{" + ",".join(map(str, members)) + "}"


def _to_dot(graph: dict) -> str:
    name = "H_%d_%d" % (graph["lambda"], graph["d"])
    if graph["view"] == "G":
        name = "G_%d_%d_%d" % (graph["lambda"], graph["lambda"] * graph["m"], graph["d"])
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    if graph["view"] == "G":
        for k in range(1, graph["layers"] + 1):
            ids = [f"n{nd['id']}" for nd in graph["nodes"] if nd["layer"] == k]
            lines.append("  { rank=same; " + " ".join(ids) + "; }")
    for nd in graph["nodes"]:
        label = _label(nd["members"])
        if graph["view"] == "G":
            label = f"{nd['layer']},{label}"
        lines.append(f'  n{nd["id"]} [label="{label}"];')
    for i, j in graph["edges"]:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(
    lam: int,
    d: int,
    format: str = "dot",
    m: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> str:
    """Render ``H(lam, d)``, or ``G(lam, lam*m, d)`` when ``m`` is given, as DOT or JSON."""
    if format not in ("dot", "json"):
        raise UnsupportedFormat(f"unsupported graph format {format!r}")
    graph = _h_view(lam, d, limits) if m is None else _g_view(lam, d, m, limits)
    if format == "json":
        return json.dumps(graph, indent=1) + "\n"
    return _to_dot(graph)
