import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from makerbreaker.errors import InvalidInput, NoHittingTime
from makerbreaker.graph import Graph
from makerbreaker.random_process import (
    PairOrdering,
    hitting_time,
    min_degree_at_least,
    min_degree_hitting_time,
    pair_index,
    prefix_graph,
    sample_gnm,
    sample_gnp,
    sample_gnp_minus,
    sample_process,
    stream,
    thin_edges,
    thresholds,
)


def test_prefix_graph_examples():
    pi = PairOrdering.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
    assert prefix_graph(pi, 0) == Graph.empty(3)
    assert prefix_graph(pi, 2) == Graph(3, [(0, 1), (0, 2)])
    assert prefix_graph(pi, 3) == Graph.complete(3)
    with pytest.raises(InvalidInput):
        prefix_graph(pi, 4)


def test_pair_index_matches_upper_triangle_order():
    n = 7
    us, vs = np.triu_indices(n, 1)
    for i, (u, v) in enumerate(zip(us, vs)):
        assert pair_index(n, int(u), int(v)) == i == pair_index(n, int(v), int(u))


def test_ordering_must_be_a_permutation():
    with pytest.raises(InvalidInput):
        PairOrdering(3, [0, 0, 1])
    with pytest.raises(InvalidInput):
        PairOrdering(3, [0, 1])


def test_hitting_time_examples():
    pi = PairOrdering.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
    assert hitting_time(pi, min_degree_at_least(1)) == 2
    assert hitting_time(pi, min_degree_at_least(1), monotone=False) == 2
    assert min_degree_hitting_time(pi, 1) == 2
    pi2 = sample_process(2, 5)
    assert hitting_time(pi2, min_degree_at_least(1)) == 1
    with pytest.raises(NoHittingTime):
        hitting_time(pi, min_degree_at_least(3))
    with pytest.raises(NoHittingTime):
        min_degree_hitting_time(pi, 3)


def test_binary_search_agrees_with_linear_scan():
    prop = min_degree_at_least(2)
    for i in range(100):
        pi = sample_process(100, (20, i))
        tau = hitting_time(pi, prop)
        assert hitting_time(pi, prop, monotone=False) == tau
        assert min_degree_hitting_time(pi, 2) == tau


def test_process_is_uniform_on_three_vertices():
    trials = 6000
    counts = Counter(tuple(sample_process(3, (1, i)).order.tolist()) for i in range(trials))
    assert len(counts) == 6
    expect = trials / 6
    sigma = math.sqrt(trials * (1 / 6) * (5 / 6))
    assert all(abs(c - expect) < 5 * sigma for c in counts.values())


def test_gnm_marginals_match_process_prefix():
    n, M, trials = 8, 10, 10_000
    total = n * (n - 1) // 2
    a = np.zeros(total)
    b = np.zeros(total)
    for i in range(trials):
        for u, v in sample_gnm(n, M, (2, i)).edges:
            a[pair_index(n, u, v)] += 1
        for u, v in prefix_graph(sample_process(n, (3, i)), M).edges:
            b[pair_index(n, u, v)] += 1
    p = M / total
    sigma = math.sqrt(trials * p * (1 - p))
    assert np.all(np.abs(a - trials * p) < 3.5 * sigma)
    assert np.all(np.abs(b - trials * p) < 3.5 * sigma)
    # two-sample chi-square over the 28 pair counts, 27 degrees of freedom
    chi2 = float(np.sum((a - b) ** 2 / (a + b)))
    assert chi2 < 27 + 3 * math.sqrt(2 * 27)


def test_gnm_edge_cases():
    assert sample_gnm(6, 0, 1) == Graph.empty(6)
    assert sample_gnm(6, 15, 1) == Graph.complete(6)
    assert sample_gnm(6, 7, 1).m == 7
    with pytest.raises(InvalidInput):
        sample_gnm(6, 16, 1)


def test_gnp_examples():
    assert sample_gnp(6, 0.0, 1) == Graph.empty(6)
    g = sample_gnp_minus(5, 1.0, [(0, 1)], 1)
    assert g == Graph.complete(5).without_edges([(0, 1)])
    with pytest.raises(InvalidInput):
        sample_gnp(5, 1.5, 0)
    with pytest.raises(InvalidInput):
        sample_gnp_minus(5, 0.5, [(0, 0)], 0)
    with pytest.raises(InvalidInput):
        sample_gnp_minus(5, 0.5, [(0, 9)], 0)


def test_gnp_edge_count_mean():
    trials = 10_000
    counts = np.array([sample_gnp(8, 0.5, (4, i)).m for i in range(trials)])
    # Binomial(28, 1/2): mean 14, standard error sqrt(7 / trials)
    assert abs(counts.mean() - 14) < 3 * math.sqrt(7 / trials)


def test_thinning():
    k10 = Graph.complete(10)
    assert thin_edges(k10, 1.0, 0) == k10
    assert thin_edges(k10, 0.0, 0) == Graph.empty(10)
    trials = 10_000
    kept = np.array([thin_edges(k10, 0.5, (5, i)).m for i in range(trials)])
    assert abs(kept.mean() - 22.5) < 3 * math.sqrt(45 * 0.25 / trials)
    sub = thin_edges(k10, 0.3, 7)
    assert set(sub.edges) <= set(k10.edges)


def test_thresholds_values():
    # frozen from an independent numpy evaluation of the closed forms
    t = thresholds(1000, 1)
    assert t.m_k == pytest.approx(3121.3085098844754, abs=1e-6)
    assert t.M_k == pytest.approx(3779.5390138186795, abs=1e-6)
    assert thresholds(1000, 2).m_k == pytest.approx(4086.6645544755497, abs=1e-6)
    assert thresholds(1000, 4).M_k == pytest.approx(6675.607147591904, abs=1e-6)
    assert thresholds(16, 1).m_k == pytest.approx(20.647502939142615, abs=1e-9)
    with pytest.raises(InvalidInput):
        thresholds(15, 1)
    with pytest.raises(InvalidInput):
        thresholds(100, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(16, 10**6), st.integers(1, 10))
def test_threshold_gap(n, k):
    t = thresholds(n, k)
    gap = (n - 1) / 2 * 2 * math.log(math.log(math.log(n)))
    assert 0 < t.m_k < t.M_k
    assert t.M_k - t.m_k == pytest.approx(gap, rel=1e-9)
    assert t.strictly_between((t.m_k + t.M_k) / 2)
    assert not t.strictly_between(t.m_k)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32))
def test_process_nesting(n, seed):
    pi = sample_process(n, seed)
    prev = set()
    for t in range(len(pi) + 1):
        cur = set(prefix_graph(pi, t).edges)
        assert len(cur) == t and prev <= cur
        prev = cur


def test_streams_are_reproducible_and_distinct():
    a = stream(7, 3).integers(0, 2**62, size=4)
    assert np.array_equal(a, stream(7, 3).integers(0, 2**62, size=4))
    assert not np.array_equal(a, stream(7, 4).integers(0, 2**62, size=4))
    assert sample_process(9, (1, 2)) == sample_process(9, (1, 2))
    with pytest.raises(InvalidInput):
        stream(-1, 0)
