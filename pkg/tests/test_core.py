from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vcramsey.core import (
    Graph,
    Hypergraph,
    InputError,
    Partition,
    VertexSet,
    density,
    format_graph,
    is_epsilon_homogeneous,
    parse_graph,
    parse_hypergraph,
    parse_rational,
    rank_subset,
    symmetric_difference_size,
    tuple_neighborhood,
    unrank_subset,
)

from conftest import brute_edge_count, cycle, graphs


def test_parse_path():
    g = parse_graph("n=3\n0 1\n1 2\n")
    assert g.n == 3 and g.edges == {(0, 1), (1, 2)}


def test_parse_empty_and_comments():
    g = parse_graph("# header next\nn=2  # two vertices\n")
    assert g.n == 2 and g.edge_count == 0


@pytest.mark.parametrize("text", ["n=2\n0 0\n", "n=2\n0 2\n", "0 1\n", "n=x\n", "n=3\n0 1 2\n"])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_graph(text)


def test_duplicate_edges_collapse():
    assert parse_graph("n=2\n0 1\n1 0\n").edge_count == 1


def test_parse_hypergraph():
    h = parse_hypergraph("n=4\n0 1 2\n0 1 3\n", 3)
    assert h.edge_count == 2
    with pytest.raises(InputError):
        parse_hypergraph("n=4\n0 1 1\n", 3)


def test_hypergraph_k2_matches_graph():
    text = "n=5\n0 1\n1 2\n3 4\n"
    assert parse_hypergraph(text, 2).to_graph().edges == parse_graph(text).edges


def test_tuple_neighborhood():
    h = Hypergraph(4, 3, [(0, 1, 2), (0, 1, 3)])
    assert tuple_neighborhood(h, (0, 1)).members() == (2, 3)
    assert not tuple_neighborhood(h, (2, 3))
    assert tuple_neighborhood(cycle(5), (0,)).members() == (1, 4)


def test_density_examples():
    k33 = Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
    left, right = VertexSet.of(6, range(3)), VertexSet.of(6, range(3, 6))
    assert density(k33, [left, right]) == 1
    assert density(Graph.empty(6), [left, right]) == 0
    c4 = cycle(4)
    assert density(c4, [VertexSet.of(4, [0, 2]), VertexSet.of(4, [1, 3])]) == 1


def test_homogeneity_boundary():
    c4 = cycle(4)
    parts = [VertexSet.of(4, [0, 1]), VertexSet.of(4, [2, 3])]
    assert density(c4, parts) == Fraction(1, 2)
    assert not is_epsilon_homogeneous(c4, parts, Fraction(1, 5))
    assert not is_epsilon_homogeneous(c4, parts, Fraction(1, 2))
    k2 = Graph.complete(4)
    assert is_epsilon_homogeneous(k2, parts, Fraction(1, 3))


def test_symmetric_difference_examples():
    a = VertexSet.of(6, [1, 2, 3])
    assert symmetric_difference_size(a, a) == 0
    assert symmetric_difference_size(a, VertexSet.of(6, [3, 4])) == 3
    k = Graph.complete(5)
    assert symmetric_difference_size(k.neighborhood(0), k.neighborhood(1)) == 2


@given(st.integers(1, 40).flatmap(
    lambda n: st.tuples(*[st.integers(0, (1 << n) - 1)] * 3).map(lambda t: (n, t))))
def test_triangle_inequality(case):
    n, (a, b, c) = case
    A, B, C = (VertexSet(n, x) for x in (a, b, c))
    assert symmetric_difference_size(A, C) <= (
        symmetric_difference_size(A, B) + symmetric_difference_size(B, C))


@given(graphs(min_n=2, max_n=8), st.data())
def test_density_times_product_is_edge_count(g, data):
    perm = data.draw(st.permutations(range(g.n)))
    cut = data.draw(st.integers(1, g.n - 1))
    parts = [VertexSet.of(g.n, perm[:cut]), VertexSet.of(g.n, perm[cut:])]
    d = density(g, parts)
    assert d * cut * (g.n - cut) == brute_edge_count(g, parts)


@given(graphs(max_n=10))
def test_graph_symmetric_irreflexive_and_roundtrip(g):
    a = g.matrix
    assert (a == a.T).all() and not a.diagonal().any()
    assert parse_graph(format_graph(g)).edges == g.edges


@given(st.lists(st.integers(0, 30), min_size=1, max_size=4, unique=True))
def test_colex_rank_roundtrip(t):
    t = sorted(t)
    assert unrank_subset(rank_subset(t), len(t)) == tuple(t)


def test_parse_rational():
    assert parse_rational("3/7") == Fraction(3, 7)
    with pytest.raises(InputError):
        parse_rational("0.2")


def test_partition_validation():
    p = Partition.from_parts(5, [[0, 1], [2, 3, 4]])
    assert p.part_sizes == (2, 3) and p.equitable
    with pytest.raises(ValueError):
        Partition.from_parts(3, [[0], [0, 1, 2]])
    with pytest.raises(ValueError):
        Partition.from_parts(3, [[0, 1]])
