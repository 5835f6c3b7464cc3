"""Graph indexing, counting statistics, PageRank, and edge weights."""

import math
import random

import numpy as np
import pytest

from dsnip import (DEGREE_PENALIZED, UNIFORM, DsnipError, RdfGraph, Triple,
                   compute_stats, edge_weight, iri, literal)
from dsnip.model import RDF_TYPE

from .gens import dense_pagerank, random_connected_graph, random_typed_graph

EX = "http://ex.test/"


def _t(s, p, o):
    return Triple(iri(EX + s), iri(EX + p), o if not isinstance(o, str) else iri(EX + o))


@pytest.fixture()
def small_graph():
    # alpha -knows-> beta, beta -knows-> gamma, gamma -likes-> alpha,
    # alpha typed Person, beta typed Person, gamma typed Robot,
    # alpha -name-> "A" (literal), gamma self-loop via likes.
    triples = [
        _t("alpha", "knows", "beta"),
        _t("beta", "knows", "gamma"),
        _t("gamma", "likes", "alpha"),
        Triple(iri(EX + "alpha"), iri(RDF_TYPE), iri(EX + "Person")),
        Triple(iri(EX + "beta"), iri(RDF_TYPE), iri(EX + "Person")),
        Triple(iri(EX + "gamma"), iri(RDF_TYPE), iri(EX + "Robot")),
        Triple(iri(EX + "alpha"), iri(EX + "name"), literal("A")),
        _t("gamma", "likes", "gamma"),
    ]
    return RdfGraph(triples)


def test_degree_counts_incident_triples(small_graph):
    stats = small_graph.stats()
    deg = {n.lexical: d for n, d in stats.degree.items()}
    # alpha: knows-out, likes-in, type, name = 4
    assert deg[EX + "alpha"] == 4
    # beta: knows-in, knows-out, type = 3
    assert deg[EX + "beta"] == 3
    # gamma: knows-in, likes-out, type, self-loop (counted once) = 4
    assert deg[EX + "gamma"] == 4
    assert deg[EX + "Person"] == 2
    assert deg[EX + "Robot"] == 1
    assert deg["A"] == 1


def test_class_freq_distinct_subjects(small_graph):
    stats = small_graph.stats()
    assert stats.class_freq == {EX + "Person": 2, EX + "Robot": 1}


def test_prop_freq_counts_triples(small_graph):
    stats = small_graph.stats()
    assert stats.prop_freq == {
        EX + "knows": 2,
        EX + "likes": 2,
        EX + "name": 1,
        RDF_TYPE: 3,
    }


def test_pagerank_sums_to_one_and_excludes_literals(small_graph):
    stats = small_graph.stats()
    assert abs(sum(stats.pagerank.values()) - 1.0) < 1e-6
    assert all(v >= 0.0 for v in stats.pagerank.values())
    assert all(n.kind != "literal" for n in stats.pagerank)
    idx = small_graph.index()
    arr = stats.pagerank_arr
    assert arr.shape == (idx.n_nodes,)
    lit_ids = np.nonzero(idx.is_literal)[0]
    assert lit_ids.size == 1
    assert arr[lit_ids[0]] == 0.0
    with pytest.raises(ValueError):
        arr[0] = 0.5  # read-only


def test_pagerank_symmetry_two_nodes():
    g = RdfGraph([_t("a", "p", "b")])
    stats = g.stats()
    vals = {n.lexical: v for n, v in stats.pagerank.items()}
    assert abs(vals[EX + "a"] - 0.5) < 1e-9
    assert abs(vals[EX + "b"] - 0.5) < 1e-9


def test_pagerank_path_symmetry():
    g = RdfGraph([_t("a", "p", "b"), _t("b", "p", "c")])
    stats = g.stats(tolerance=1e-12, max_iterations=500)
    vals = {n.lexical: v for n, v in stats.pagerank.items()}
    assert abs(vals[EX + "a"] - vals[EX + "c"]) < 1e-10
    assert vals[EX + "b"] > vals[EX + "a"]


def test_pagerank_matches_dense_oracle():
    rng = np.random.default_rng(404)
    for _ in range(20):
        g = random_connected_graph(rng, max_nodes=14, max_triples=24)
        stats = g.stats(tolerance=1e-12, max_iterations=400)
        oracle = dense_pagerank(g, damping=0.85)
        for n, expect in oracle.items():
            assert abs(stats.pagerank[n] - expect) <= 1e-8


def test_pagerank_oracle_with_literals_and_damping():
    rng = np.random.default_rng(505)
    for damping in (0.5, 0.85, 0.95):
        g = random_typed_graph(rng, n_triples=40)
        stats = g.stats(damping=damping, tolerance=1e-12, max_iterations=600)
        oracle = dense_pagerank(g, damping=damping)
        assert set(oracle) == set(stats.pagerank)
        for n, expect in oracle.items():
            assert abs(stats.pagerank[n] - expect) <= 1e-8


def test_top_pagerank_sum(small_graph):
    stats = small_graph.stats()
    ranked = sorted(stats.pagerank.values(), reverse=True)
    assert abs(stats.top_pagerank_sum(2) - sum(ranked[:2])) < 1e-12
    assert abs(stats.top_pagerank_sum(100) - sum(ranked)) < 1e-12


def test_stats_cached_per_config(small_graph):
    a = small_graph.stats()
    b = small_graph.stats()
    assert a is b
    c = small_graph.stats(damping=0.5)
    assert c is not a


def test_empty_graph_rejected():
    with pytest.raises(DsnipError):
        compute_stats(RdfGraph([]))


@pytest.mark.parametrize("damping", [0.0, 1.0, -0.2, 1.5])
def test_damping_validated(small_graph, damping):
    with pytest.raises(ValueError):
        compute_stats(small_graph, damping=damping)


def test_index_deterministic_under_reordering(small_graph):
    rng = random.Random(7)
    base = small_graph.index()
    for _ in range(5):
        shuffled = list(small_graph.triples)
        rng.shuffle(shuffled)
        other = RdfGraph(shuffled).index()
        assert other.nodes == base.nodes
        assert other.triples == base.triples
        np.testing.assert_array_equal(other.subj, base.subj)
        np.testing.assert_array_equal(other.obj, base.obj)
        np.testing.assert_array_equal(other.indptr, base.indptr)
        np.testing.assert_array_equal(other.adj_triple, base.adj_triple)
        np.testing.assert_array_equal(other.degree, base.degree)


def test_edge_weight_uniform(small_graph):
    for t in small_graph.triples:
        assert edge_weight(small_graph, t, UNIFORM) == 1.0


def test_edge_weight_degree_penalized_hand_value(small_graph):
    t = _t("alpha", "knows", "beta")  # deg(alpha)=4, deg(beta)=3
    expect = (math.log2(5) + math.log2(4)) / 2.0
    assert abs(edge_weight(small_graph, t, DEGREE_PENALIZED) - expect) < 1e-12


def test_edge_weight_default_scheme(small_graph):
    t = _t("alpha", "knows", "beta")
    assert edge_weight(small_graph, t) == edge_weight(small_graph, t, DEGREE_PENALIZED)


def test_weights_array_matches_edge_weight(small_graph):
    idx = small_graph.index()
    for scheme in (UNIFORM, DEGREE_PENALIZED):
        w = idx.weights(scheme)
        assert np.all(w >= 1.0)
        for i, t in enumerate(idx.triples):
            assert abs(w[i] - edge_weight(small_graph, t, scheme)) < 1e-9
        with pytest.raises(ValueError):
            w[0] = 9.0  # read-only


def test_edge_weight_errors(small_graph):
    t = _t("alpha", "knows", "beta")
    with pytest.raises(ValueError, match="scheme"):
        edge_weight(small_graph, t, "exotic")
    with pytest.raises(ValueError, match="scheme"):
        small_graph.index().weights("exotic")
    missing = _t("alpha", "knows", "nobody")
    with pytest.raises(ValueError, match="not in graph"):
        edge_weight(small_graph, missing)


def test_isolated_entities_keep_teleport_mass():
    # Two disconnected pairs; PageRank mass still sums to 1.
    g = RdfGraph([_t("a", "p", "b"), _t("c", "p", "d")])
    stats = g.stats()
    assert abs(sum(stats.pagerank.values()) - 1.0) < 1e-6
    vals = {n.lexical: v for n, v in stats.pagerank.items()}
    assert abs(vals[EX + "a"] - 0.25) < 1e-9


def test_entity_with_only_literal_neighbors_is_dangling():
    # "a" has no entity-entity edges: it holds teleport-only mass but stays ranked.
    g = RdfGraph([
        Triple(iri(EX + "a"), iri(EX + "name"), literal("x")),
        _t("b", "p", "c"),
    ])
    stats = g.stats(tolerance=1e-12, max_iterations=400)
    oracle = dense_pagerank(g)
    for n, expect in oracle.items():
        assert abs(stats.pagerank[n] - expect) <= 1e-8
    assert iri(EX + "a") in stats.pagerank
