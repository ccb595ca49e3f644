import itertools
from fractions import Fraction
from math import ceil, log2

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vcramsey.core import Graph, Refusal, VertexSet
from vcramsey.families import (
    blow_up,
    complete_multipartite,
    multipartite_block_noise,
    random_cograph,
)
from vcramsey.randgen import sample_gnp
from vcramsey.ramsey import (
    JOIN,
    LEAF,
    UNION,
    cotree_clique_stable,
    extract_cograph,
    is_cograph,
    brute_force_extremes,
    max_clique,
    max_independent_set,
    rt_independent_set,
    schedule_epsilon,
)

from conftest import cycle, graphs, path


def connected(vertices, adj):
    vertices = list(vertices)
    if not vertices:
        return True
    seen, stack = {vertices[0]}, [vertices[0]]
    while stack:
        u = stack.pop()
        for v in vertices:
            if v not in seen and adj(u, v):
                seen.add(v)
                stack.append(v)
    return len(seen) == len(vertices)


def components(vertices, adj):
    rest, out = list(vertices), []
    while rest:
        comp = [rest.pop(0)]
        grown = True
        while grown:
            grown = False
            for v in list(rest):
                if any(adj(u, v) for u in comp):
                    comp.append(v)
                    rest.remove(v)
                    grown = True
        out.append(comp)
    return out


def definitional_cograph(g, vertices=None):
    """A graph on >= 2 vertices is a cograph iff it or its complement is
    disconnected and every (co-)component is a cograph."""
    vertices = list(range(g.n)) if vertices is None else vertices
    if len(vertices) <= 1:
        return True
    for adj in (g.has_edge, lambda u, v: not g.has_edge(u, v)):
        comps = components(vertices, adj)
        if len(comps) > 1:
            return all(definitional_cograph(g, c) for c in comps)
    return False


def cotree_graph(t, n):
    """Rebuild the adjacency represented by a cotree."""
    a = np.zeros((n, n), dtype=bool)

    def walk(node):
        if node.label == JOIN:
            for x, y in itertools.combinations(node.children, 2):
                for u in x.vertices():
                    for v in y.vertices():
                        a[u, v] = a[v, u] = True
        for c in node.children:
            walk(c)

    walk(t)
    return a


def check_cotree(t, g, members):
    assert t.members == members
    idx = list(VertexSet(g.n, members))
    assert (cotree_graph(t, g.n)[np.ix_(idx, idx)] == g.matrix[np.ix_(idx, idx)]).all()
    stack = [t]
    while stack:
        node = stack.pop()
        if node.label != LEAF:
            assert len(node.children) >= 2
            assert all(c.label != node.label for c in node.children)
        stack.extend(node.children)


def test_cograph_examples():
    k4 = is_cograph(Graph.complete(4))
    assert k4 and k4.cotree.label == JOIN and len(k4.cotree.children) == 4
    p4 = is_cograph(path(4))
    assert not p4 and p4.witness == (0, 1, 2, 3)
    c4 = is_cograph(cycle(4))
    assert c4 and c4.cotree.label == JOIN
    assert all(ch.label == UNION for ch in c4.cotree.children)


def test_clique_stable_examples():
    one = is_cograph(Graph.empty(1)).cotree
    assert tuple(map(len, cotree_clique_stable(one))) == (1, 1)
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert tuple(map(len, cotree_clique_stable(is_cograph(two_triangles).cotree))) == (3, 2)
    assert tuple(map(len, cotree_clique_stable(is_cograph(cycle(4)).cotree))) == (2, 2)


@pytest.mark.parametrize("g, expected", [
    (cycle(5), (2, 2, 3)),
    (Graph.complete(5), (5, 1, 5)),
    (Graph.empty(6), (1, 6, 6)),
])
def test_brute_force_extremes(g, expected):
    assert tuple(map(len, brute_force_extremes(g))) == expected


@given(graphs(max_n=8))
def test_is_cograph_matches_definition(g):
    v = is_cograph(g)
    assert bool(v) == definitional_cograph(g)
    if v:
        check_cotree(v.cotree, g, (1 << g.n) - 1)
    else:
        a, b, c, d = v.witness
        sub = g.induced([a, b, c, d])
        assert sub.edges == {(0, 1), (1, 2), (2, 3)}


@settings(max_examples=60)
@given(st.integers(1, 14), st.integers(0, 2**32 - 1))
def test_cotree_dp_matches_brute_force(n, seed):
    g = random_cograph(n, seed)
    clique, stable = cotree_clique_stable(is_cograph(g).cotree)
    assert len(clique) == len(max_clique(g)) and len(stable) == len(max_independent_set(g))
    assert all(g.has_edge(u, v) for u, v in itertools.combinations(clique, 2))
    assert not any(g.has_edge(u, v) for u, v in itertools.combinations(stable, 2))
    assert max(len(clique), len(stable)) ** 2 >= n


def test_schedule_is_exact_and_decreasing():
    e = [schedule_epsilon(n) for n in (64, 512, 4096)]
    assert all(isinstance(x, Fraction) for x in e)
    assert e[0] > e[1] > e[2] > 0 and e[0] < Fraction(1, 32)


def test_extract_whole_cograph_and_clique():
    for g in (Graph.complete(40), random_cograph(200, 3)):
        vs, trace = extract_cograph(g)
        assert len(vs) == g.n and trace.levels[0]["branch"] == "whole"


def test_extract_gnp_floor():
    g = sample_gnp(512, 0.5, seed=1)
    vs, _ = extract_cograph(g)
    assert len(vs) >= ceil(0.5 * log2(512)) and is_cograph(g, vs.bits)


def test_extract_runs_regularity_on_blown_up_c5():
    c5 = cycle(5).matrix
    g = blow_up(c5, [820, 819, 819, 819, 819])
    vs, trace = extract_cograph(g, c=Fraction(1, 100))
    top = trace.levels[0]
    assert "K" in top and top["bad_pairs"] <= Fraction(top["bad_pair_bound"])
    assert len(vs) >= 2 * 819 and is_cograph(g, vs.bits)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=1, max_n=12))
def test_extract_small_graphs_is_optimal(g):
    vs, _ = extract_cograph(g)
    assert len(vs) == len(brute_force_extremes(g)[2])


def test_rt_tripartite():
    g = complete_multipartite(3, 300)
    r = rt_independent_set(g, 3, Fraction(1, 20), Fraction(9, 10))
    s = list(r.independent_set)
    assert not any(g.has_edge(u, v) for u, v in itertools.combinations(s, 2))
    assert len(s) >= g.n / (2 * r.K)


@pytest.mark.parametrize("g", [Graph.empty(100), sample_gnp(100, 0.1, seed=4)])
def test_rt_refuses_below_density(g):
    with pytest.raises(Refusal, match="density"):
        rt_independent_set(g, 3, Fraction(1, 10), Fraction(9, 10))


def test_rt_finds_k2p_witness():
    # every part of a complete graph holds an edge, so each step grows the clique
    g = Graph.complete(1000)
    with pytest.raises(Refusal, match="K_6") as info:
        rt_independent_set(g, 3, Fraction(1, 20), Fraction(9, 10))
    witness = info.value.report["witness"]
    assert len(witness) == 6
    assert all(g.has_edge(u, v) for u, v in itertools.combinations(witness, 2))


@pytest.mark.parametrize("p, m, blocks, eps", [(3, 1000, 8, Fraction(1, 20)), (4, 750, 6, Fraction(1, 50))])
def test_rt_block_noise(p, m, blocks, eps):
    g = multipartite_block_noise(p, m, blocks, 0.05, seed=1)
    r = rt_independent_set(g, p, eps, Fraction(9, 10))
    s = list(r.independent_set)
    assert not any(g.has_edge(u, v) for u, v in itertools.combinations(s, 2))
    assert len(s) >= g.n / (2 * r.K)
