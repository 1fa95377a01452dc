import json
from itertools import combinations
from math import comb

import pytest

from fpaball.core import StateWidthExceeded, UnsupportedFormat, WindowSubset, Limits
from fpaball.graph import (
    build_adjacency,
    edge_count,
    export_graph,
    iter_edges,
    out_degree,
    out_edges,
    start_vertex,
    vertex_at,
    vertex_index,
    vertices,
)

from figures import FIG3_EDGES, FIG3_NODES
from oracles import naive_out_edges

def ws(members, lam=2, d=1):
    return WindowSubset.from_members(members, lam, d)


def test_vertices_two_one():
    assert [v.members for v in vertices(2, 1)] == FIG3_NODES


@pytest.mark.parametrize("lam,d,count", [(1, 1, 2), (3, 1, 20), (2, 2, 70)])
def test_vertex_counts(lam, d, count):
    vs = list(vertices(lam, d))
    assert len(vs) == count == len({v.mask for v in vs})


def test_vertex_index_round_trip():
    for i, v in enumerate(vertices(2, 2)):
        assert vertex_index(v) == i
        assert vertex_at(i, 2, 2) == v
    assert vertex_index(start_vertex(3, 2)) == 0
    assert start_vertex(2, 1).members == (1, 2)


def test_vertices_state_width():
    with pytest.raises(StateWidthExceeded):
        list(vertices(2, 2, Limits(state_width=4)))


def test_fig3_edges():
    for src, dsts in FIG3_EDGES.items():
        got = [d.members for d in out_edges(2, 1, ws(src))]
        assert len(got) == len(set(got))
        assert set(got) == dsts


def test_out_edges_colex_order():
    got = [d.members for d in out_edges(2, 1, ws((0, 2)))]
    assert got == [(1, 2), (0, 2), (0, 1)]


@pytest.mark.parametrize("members,deg", [((1, 2), 6), ((-1, 0), 1), ((0, 1), 3)])
def test_out_degree_examples(members, deg):
    assert out_degree(2, 1, ws(members)) == deg


def test_adjacency_two_one():
    a = build_adjacency(2, 1)
    assert a.shape == (6, 6)
    assert sorted(int(s) for s in a.sum(axis=1)) == [1, 3, 3, 3, 3, 6]
    assert int(a.sum()) == 19
    assert a[0, 0] == 1


def test_adjacency_one_one():
    a = build_adjacency(1, 1)
    # index 0 is {1}, index 1 is {0}
    assert vertex_at(0, 1, 1).members == (1,)
    assert int(a[0].sum()) == comb(2, 1)
    assert int(a[1].sum()) == comb(1, 0)
    assert a.tolist() == [[1, 1], [1, 0]]


@pytest.mark.parametrize("lam,d", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (1, 3), (1, 4)])
def test_edge_rule_matches_naive(lam, d):
    for v in vertices(lam, d):
        fast = [frozenset(x.members) for x in out_edges(lam, d, v)]
        assert set(fast) == set(naive_out_edges(lam, d, v.members))
        assert len(fast) == len(set(fast))


@pytest.mark.parametrize("lam,d", [(1, 1), (2, 1), (3, 1), (1, 3), (2, 2), (3, 2), (2, 3), (1, 6), (6, 1)])
def test_degree_formula_and_edge_bound(lam, d):
    total = 0
    for v in vertices(lam, d):
        streamed = sum(1 for _ in out_edges(lam, d, v))
        assert streamed == out_degree(lam, d, v)
        total += streamed
    assert total == edge_count(lam, d) == sum(1 for _ in iter_edges(lam, d))
    assert total <= comb(2 * d * lam, d * lam) * comb(d * lam + lam, lam)


@pytest.mark.parametrize("lam,d", [(1, 1), (2, 1), (3, 1), (1, 3), (2, 2), (3, 2), (2, 3), (1, 6), (6, 1)])
def test_self_loop_on_start(lam, d):
    s = start_vertex(lam, d)
    assert s in set(out_edges(lam, d, s))


def test_row_sums_match_degree():
    a = build_adjacency(2, 2)
    for i, v in enumerate(vertices(2, 2)):
        assert int(a[i].sum()) == out_degree(2, 2, v)


def test_export_h_json():
    g = json.loads(export_graph(2, 1, "json"))
    assert len(g["nodes"]) == 6 and len(g["edges"]) == 19
    assert [tuple(nd["members"]) for nd in g["nodes"]] == FIG3_NODES
    edges = {(tuple(g["nodes"][i]["members"]), tuple(g["nodes"][j]["members"])) for i, j in g["edges"]}
    assert edges == {(s, t) for s, ds in FIG3_EDGES.items() for t in ds}


def test_export_h_dot():
    text = export_graph(2, 1, "dot")
    assert text.startswith("digraph H_2_1 {")
    assert text.count("->") == 19
    assert '[label="{-1,0}"]' in text


def test_export_g_view():
    g = json.loads(export_graph(2, 1, "json", m=3))
    assert g["layers"] == 4
    layers = {}
    for nd in g["nodes"]:
        layers.setdefault(nd["layer"], []).append(nd)
    assert sorted(layers) == [1, 2, 3, 4]
    assert all(len(v) == 6 for v in layers.values())
    assert len(g["edges"]) == 3 * 19
    text = export_graph(2, 1, "dot", m=3)
    assert text.count("rank=same") == 4


def test_export_bad_format():
    with pytest.raises(UnsupportedFormat):
        export_graph(2, 1, "xml")
