import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vcramsey.core import Graph, Hypergraph, SetSystem, VertexSet
from vcramsey.vc import (
    dual_system,
    graph_vc_search,
    is_shattered,
    neighborhood_system,
    primal_shatter_value,
    sauer_bound,
    shatter_profile,
    trace_count,
    twin_classes,
    vc_dimension,
    vc_search,
)

from conftest import cycle, graphs, set_systems


def brute_vc(s: SetSystem) -> int:
    """Largest shattered subset by plain enumeration."""
    u = s.universe_size
    best = 0
    for r in range(u + 1):
        for t in itertools.combinations(range(u), r):
            mask = sum(1 << i for i in t)
            if len({row & mask for row in s.bitsets}) == 1 << r:
                best = r
    return best


def test_neighborhood_system_examples():
    assert neighborhood_system(Graph.empty(3)).bitsets == (0, 0, 0)
    assert all(bin(b).count("1") == 2 for b in neighborhood_system(cycle(5)).bitsets)


def test_hypergraph_neighborhood_system():
    h = Hypergraph(4, 3, [(0, 1, 2), (0, 1, 3)])
    rows = neighborhood_system(h).bitsets
    assert len(rows) == comb(4, 2)
    # pairs inside an edge see the edge's third vertex
    expected = {(0, 1): 0b1100, (0, 2): 0b0010, (1, 2): 0b0001,
                (0, 3): 0b0010, (1, 3): 0b0001, (2, 3): 0}
    assert sorted(rows) == sorted(expected.values())


def test_dual_examples():
    s = SetSystem.from_sets(2, [[0], [1]])
    d = dual_system(s)
    assert d.universe_size == 2 and sorted(d.bitsets) == [1, 2]
    single = dual_system(SetSystem.from_sets(3, [[0, 2]]))
    assert set(single.bitsets) <= {0, 1}


def test_shattering_examples(c5):
    s = neighborhood_system(c5)
    assert is_shattered(s, VertexSet(5, 0))
    assert is_shattered(s, VertexSet.of(5, [0, 2]))
    assert not is_shattered(s, VertexSet.of(5, [0, 1, 2]))
    assert trace_count(s, VertexSet.of(5, [0, 2])) == 4


@pytest.mark.parametrize("g, d", [(Graph.empty(4), 0), (Graph.complete(5), 1), (cycle(5), 2)])
def test_vc_dimension_examples(g, d):
    assert vc_dimension(neighborhood_system(g)) == d
    assert graph_vc_search(g).dimension == d


def test_primal_shatter_examples(c5):
    s = neighborhood_system(c5)
    assert primal_shatter_value(s, 0)[0] == 1
    assert primal_shatter_value(s, 1)[0] == 2
    assert primal_shatter_value(s, 2)[0] == 4
    assert shatter_profile(s, 3).values[:3] == (1, 2, 4)


def test_sauer_bound_examples():
    assert sauer_bound(2, 5) == 16
    assert sauer_bound(0, 7) == 1
    assert all(sauer_bound(d, z) == 2 ** z for d in range(6) for z in range(d + 1))


def test_witness_is_lex_least(c5):
    r = vc_search(neighborhood_system(c5))
    assert r.witness == (0, 2) and not r.capped


def test_cap_reports_capped():
    # the power set shatters everything
    s = SetSystem.from_bitsets(6, range(64))
    r = vc_search(s, cap=3)
    assert r.dimension == 3 and r.capped


@given(set_systems())
def test_vc_matches_enumeration(s):
    assert vc_dimension(s) == brute_vc(s)


@given(set_systems())
def test_sauer_shelah(s):
    d = vc_dimension(s)
    for z in range(min(s.universe_size, 6) + 1):
        assert primal_shatter_value(s, z)[0] <= sauer_bound(d, z)


@settings(max_examples=60)
@given(set_systems(max_universe=7, max_sets=10))
def test_dual_dimension_bound(s):
    assert vc_dimension(dual_system(s)) <= 2 ** vc_dimension(s) + 1


@given(graphs(max_n=9))
def test_graph_system_is_self_dual(g):
    a = np.array([[b >> j & 1 for j in range(g.n)] for b in neighborhood_system(g).bitsets])
    assert (a == a.T).all()
    assert vc_dimension(neighborhood_system(g)) == vc_dimension(dual_system(neighborhood_system(g)))


@given(set_systems(), st.data())
def test_shattering_is_hereditary(s, data):
    u = s.universe_size
    t = data.draw(st.integers(0, (1 << u) - 1))
    if is_shattered(s, VertexSet(u, t)):
        sub = data.draw(st.integers(0, (1 << u) - 1)) & t
        assert is_shattered(s, VertexSet(u, sub))


@given(graphs(max_n=10))
def test_twin_reduction_preserves_dimension(g):
    assert graph_vc_search(g).dimension == vc_dimension(neighborhood_system(g))
    classes = twin_classes(g)
    assert sorted(v for c in classes for v in c) == list(range(g.n))
