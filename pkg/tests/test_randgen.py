import itertools
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from vcramsey.core import BudgetExceeded, Graph, InputError
from vcramsey.randgen import (
    LllInstance,
    find_clique,
    homogeneous_pair_audit,
    ks_free_bounded_vc,
    lll_feasibility,
    scaled_instance,
    sample_gnp,
    vc_event_bound,
)
from vcramsey.vc import graph_vc_search

from conftest import cycle, graphs


def oracle_pair_exists(g, size):
    for a in itertools.combinations(range(g.n), size):
        rest = [v for v in range(g.n) if v not in a]
        for b in itertools.combinations(rest, size):
            cross = {g.has_edge(u, v) for u in a for v in b}
            if len(cross) == 1:
                return True
    return False


def brute_clique(g, s):
    return any(
        all(g.has_edge(u, v) for u, v in itertools.combinations(t, 2))
        for t in itertools.combinations(range(g.n), s)
    )


def test_gnp_extremes_and_determinism():
    assert sample_gnp(10, 0, seed=1).edge_count == 0
    assert sample_gnp(10, 1, seed=1).edge_count == 45
    assert sample_gnp(50, 0.3, seed=9).edges == sample_gnp(50, 0.3, seed=9).edges
    assert sample_gnp(50, 0.3, seed=9).edges != sample_gnp(50, 0.3, seed=10).edges


def test_lll_domain():
    with pytest.raises(InputError):
        LllInstance(100, 3, 6, 5, 1, 0.5, 0.5, 0.1)
    with pytest.raises(InputError):
        lll_feasibility(LllInstance(100, 3, 5, 5, 0.1, 0.1, 0.1, 0.1))


def test_lll_margins_are_reproducible():
    inst = scaled_instance(10**12, 3, 6, 8, 0.14, 4, 0.5, p_scale=0.5)
    a, b = lll_feasibility(inst), lll_feasibility(inst)
    assert a.feasible
    for x, y in zip(a.margins, b.margins):
        assert mpmath.isfinite(x) and x == y


def test_vc_event_bound():
    assert float(vc_event_bound(100, 0.1, 5) / mpmath.log(10)) == pytest.approx(-16, rel=1e-12)
    assert vc_event_bound(100, 0, 3) == mpmath.ninf
    assert vc_event_bound(100, 0.5, 0) == pytest.approx(math.log(100))


def test_ks_free_trivial_and_errors():
    cert = ks_free_bounded_vc(2, 3, 1, seed=0, max_tries=5)
    assert cert.tries == 1
    with pytest.raises(InputError):
        ks_free_bounded_vc(10, 3, 5, seed=0, max_tries=0)
    with pytest.raises(BudgetExceeded):
        ks_free_bounded_vc(30, 3, 5, seed=0, max_tries=1, p_scale=3.0)


def test_ks_free_certificate_is_valid():
    cert = ks_free_bounded_vc(30, 3, 5, seed=7, max_tries=10**4, p_scale=0.5)
    assert not brute_clique(cert.graph, 3)
    assert graph_vc_search(cert.graph).dimension == cert.vc_dimension <= 5


@given(graphs(max_n=9), st.integers(3, 4))
def test_find_clique_matches_enumeration(g, s):
    found = find_clique(g, s)
    assert (found is not None) == brute_clique(g, s)
    if found:
        assert all(g.has_edge(u, v) for u, v in itertools.combinations(found, 2))


def test_audit_examples():
    r = homogeneous_pair_audit(Graph.complete(6), 2)
    assert r.found and r.kind == "complete"
    assert homogeneous_pair_audit(cycle(5), 2).found == oracle_pair_exists(cycle(5), 2)
    r = homogeneous_pair_audit(cycle(8), 2, mode="sampled", budget=0, seed=1)
    assert not r.found and r.inconclusive


@settings(max_examples=200)
@given(graphs(max_n=8), st.integers(1, 3))
def test_audit_matches_double_enumeration(g, size):
    r = homogeneous_pair_audit(g, size)
    assert r.found == oracle_pair_exists(g, size)
    if r.found:
        a, b = r.witness
        assert not set(a) & set(b) and len(a) == len(b) == size
        assert len({g.has_edge(u, v) for u in a for v in b}) == 1


@settings(max_examples=50)
@given(graphs(min_n=4, max_n=8), st.integers(0, 2**16))
def test_sampled_witness_is_valid(g, seed):
    r = homogeneous_pair_audit(g, 2, mode="sampled", budget=50, seed=seed)
    if r.found:
        a, b = r.witness
        assert len({g.has_edge(u, v) for u in a for v in b}) == 1
        assert homogeneous_pair_audit(g, 2).found
