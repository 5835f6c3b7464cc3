"""Group Steiner tree solver, brute-force oracle, and the query pipeline."""

import math
import random

import numpy as np
import pytest

from dsnip import (DEGREE_PENALIZED, UNIFORM, DsnipError, EmptyQueryError,
                   EnumerationLimitError, KeywordGroups,
                   NoConnectedCoverError, RdfGraph, TooManyKeywordsError,
                   Triple, UnmatchedKeywordsError, bf_gst, iri, literal,
                   query_biased_snippet, solve_gst)
from dsnip.kernels import gstcore
from dsnip.model import RDFS_LABEL

from .gens import (assert_valid_tree, node, pred, random_connected_graph,
                   random_groups)

EX = "http://x.test/"


def _groups(**kw):
    return KeywordGroups(groups={k: tuple(v) for k, v in kw.items()})


def _edge(a, b, p=0):
    return Triple(node(a), pred(p), node(b))


def test_single_common_node_zero_triples():
    g = RdfGraph([_edge(0, 1), _edge(1, 2)])
    groups = _groups(kw0=[node(1)])
    tree = solve_gst(g, groups)
    assert tree.triples == ()
    assert tree.total_weight == 0.0
    assert tree.keyword_witness == {"kw0": node(1)}
    assert tree.nodes() == (node(1),)
    assert_valid_tree(g, tree, groups, DEGREE_PENALIZED)
    oracle = bf_gst(g, groups)
    assert oracle.triples == ()
    assert oracle.keyword_witness == {"kw0": node(1)}


def test_path_two_groups_uniform():
    g = RdfGraph([_edge(0, 1), _edge(1, 2)])
    groups = _groups(a=[node(0)], c=[node(2)])
    tree = solve_gst(g, groups, scheme=UNIFORM)
    assert set(tree.triples) == set(g.triples)
    assert tree.total_weight == pytest.approx(2.0)
    assert tree.keyword_witness == {"a": node(0), "c": node(2)}
    assert_valid_tree(g, tree, groups, UNIFORM)


def test_group_with_choice_picks_cheaper_node():
    # kw "b" may use node 1 (adjacent to 0) or node 9 (far away).
    g = RdfGraph([_edge(0, 1), _edge(1, 2), _edge(2, 9)])
    groups = _groups(a=[node(0)], b=[node(1), node(9)])
    tree = solve_gst(g, groups, scheme=UNIFORM)
    assert tree.triples == (_edge(0, 1),)
    assert tree.keyword_witness["b"] == node(1)


def test_degree_penalty_reroutes_around_hub():
    # Two routes from a to b: through a 14-degree hub (2 edges) or through
    # two quiet middle nodes (3 edges). Uniform takes the short route,
    # degree-penalized the quiet one.
    triples = [
        Triple(iri(EX + "a"), pred(0), iri(EX + "hub")),
        Triple(iri(EX + "hub"), pred(0), iri(EX + "b")),
        Triple(iri(EX + "a"), pred(0), iri(EX + "m1")),
        Triple(iri(EX + "m1"), pred(0), iri(EX + "m2")),
        Triple(iri(EX + "m2"), pred(0), iri(EX + "b")),
    ]
    for i in range(12):
        triples.append(Triple(iri(EX + "hub"), pred(1), iri(EX + f"leaf{i}")))
    g = RdfGraph(triples)
    groups = _groups(a=[iri(EX + "a")], b=[iri(EX + "b")])

    uniform = solve_gst(g, groups, scheme=UNIFORM)
    assert {t.object.lexical for t in uniform.triples} == {EX + "hub", EX + "b"}
    assert uniform.total_weight == pytest.approx(2.0)

    penalized = solve_gst(g, groups, scheme=DEGREE_PENALIZED)
    names = {n.lexical for n in penalized.nodes()}
    assert names == {EX + "a", EX + "m1", EX + "m2", EX + "b"}
    # deg(a)=deg(b)=deg(m1)=deg(m2)=2, so each of the 3 edges weighs log2(3).
    assert penalized.total_weight == pytest.approx(3 * math.log2(3), abs=1e-9)
    for scheme, tree in ((UNIFORM, uniform), (DEGREE_PENALIZED, penalized)):
        assert_valid_tree(g, tree, groups, scheme)


@pytest.mark.parametrize("scheme", [UNIFORM, DEGREE_PENALIZED])
def test_solver_matches_oracle_random(scheme):
    rng = np.random.default_rng(2024)
    solved = 0
    while solved < 40:
        g = random_connected_graph(rng, max_nodes=9, max_triples=14)
        if len(g) > 16:
            continue
        groups = random_groups(rng, g, max_groups=3)
        tree = solve_gst(g, groups, scheme=scheme)
        oracle = bf_gst(g, groups, scheme=scheme)
        assert tree.total_weight == pytest.approx(oracle.total_weight, abs=1e-9)
        assert_valid_tree(g, tree, groups, scheme)
        assert_valid_tree(g, oracle, groups, scheme)
        solved += 1


def test_oracle_tie_break_is_lexicographic():
    # Square 0-1-3-2-0 with uniform weights: both length-2 routes between
    # opposite corners tie; the oracle must take the smaller triple ids.
    t01, t13 = _edge(0, 1), _edge(1, 3)
    t02, t23 = _edge(0, 2), _edge(2, 3)
    g = RdfGraph([t01, t13, t02, t23])
    groups = _groups(a=[node(0)], b=[node(3)])
    oracle = bf_gst(g, groups, scheme=UNIFORM)
    idx = g.index()
    ids = tuple(sorted(idx.triple_id[t] for t in oracle.triples))
    candidates = [tuple(sorted((idx.triple_id[t01], idx.triple_id[t13]))),
                  tuple(sorted((idx.triple_id[t02], idx.triple_id[t23])))]
    assert ids == min(candidates)


def test_unmatched_groups_rejected():
    g = RdfGraph([_edge(0, 1)])
    groups = KeywordGroups(groups={"a": (node(0),)}, unmatched=("zz",))
    with pytest.raises(UnmatchedKeywordsError, match="zz"):
        solve_gst(g, groups)


def test_empty_groups_rejected():
    g = RdfGraph([_edge(0, 1)])
    with pytest.raises(EmptyQueryError):
        solve_gst(g, KeywordGroups(groups={}))
    with pytest.raises(UnmatchedKeywordsError, match="a"):
        solve_gst(g, _groups(a=[]))


def test_group_cap():
    g = RdfGraph([_edge(0, 1)])
    groups = KeywordGroups(groups={f"k{i}": (node(0),) for i in range(11)})
    with pytest.raises(TooManyKeywordsError, match="11"):
        solve_gst(g, groups)


def test_group_node_outside_graph():
    g = RdfGraph([_edge(0, 1)])
    with pytest.raises(DsnipError, match="not in graph"):
        solve_gst(g, _groups(a=[node(77)]))


def test_no_connected_cover_names_separated_keywords():
    # Two components: {0,1} and {5,6}; "left" and "right" cannot join.
    g = RdfGraph([_edge(0, 1), _edge(5, 6)])
    groups = _groups(left=[node(0)], right=[node(5)], both=[node(1), node(6)])
    with pytest.raises(NoConnectedCoverError) as err:
        solve_gst(g, groups)
    assert "no connected cover" in str(err.value)
    # The best component covers two of three groups; exactly one is missing.
    assert len(err.value.keywords) == 1
    assert set(err.value.keywords) <= {"left", "right"}
    with pytest.raises(NoConnectedCoverError):
        bf_gst(g, groups)


def test_cover_found_within_one_component():
    g = RdfGraph([_edge(0, 1), _edge(1, 2), _edge(5, 6)])
    groups = _groups(a=[node(0), node(5)], b=[node(2)])
    tree = solve_gst(g, groups, scheme=UNIFORM)
    assert tree.keyword_witness["a"] == node(0)
    assert node(5) not in tree.nodes()
    assert_valid_tree(g, tree, groups, UNIFORM)


def test_oracle_size_guard():
    g = RdfGraph([_edge(i, i + 1) for i in range(17)])  # 17 triples
    groups = _groups(a=[node(0)], b=[node(17)])
    with pytest.raises(EnumerationLimitError):
        bf_gst(g, groups)
    tree = bf_gst(g, groups, max_triples=17)
    assert len(tree.triples) == 17


def test_trace_weights_nondecreasing():
    rng = np.random.default_rng(5)
    g = random_connected_graph(rng, max_nodes=8, max_triples=12)
    groups = random_groups(rng, g, max_groups=2)
    events = []
    tree = solve_gst(g, groups, trace=events.append)
    assert events, "trace produced no events"
    weights = [e["weight"] for e in events]
    assert all(a <= b + 1e-12 for a, b in zip(weights, weights[1:]))
    assert all(e["covered"] for e in events)
    assert all(isinstance(e["root"], str) for e in events)
    # Tracing must not change the answer.
    assert solve_gst(g, groups).total_weight == pytest.approx(tree.total_weight)


def test_kernel_weight_scaling_invariance():
    rng = np.random.default_rng(9)
    g = random_connected_graph(rng, max_nodes=9, max_triples=14)
    groups = random_groups(rng, g, max_groups=3)
    idx = g.index()
    keywords = tuple(groups.groups)
    offsets = np.zeros(len(keywords) + 1, dtype=np.int64)
    id_groups = []
    for i, kw in enumerate(keywords):
        ids = sorted(idx.node_id[n] for n in groups.groups[kw])
        offsets[i + 1] = offsets[i] + len(ids)
        id_groups.append(np.asarray(ids, dtype=np.int64))
    group_nodes = np.concatenate(id_groups)
    w = idx.weights(DEGREE_PENALIZED)

    def run(weights):
        return gstcore.solve_states(idx.indptr, idx.adj_node, idx.adj_triple,
                                    weights, idx.subj, idx.obj, offsets,
                                    group_nodes, len(keywords), backend="numpy")

    found1, w1, ids1, wit1 = run(w)
    found3, w3, ids3, wit3 = run(3.0 * w)
    assert found1 and found3
    np.testing.assert_array_equal(ids1, ids3)
    np.testing.assert_array_equal(wit1, wit3)
    assert w3 == pytest.approx(3.0 * w1, rel=1e-12)


def test_deterministic_under_triple_reordering():
    rng = np.random.default_rng(31)
    g = random_connected_graph(rng, max_nodes=10, max_triples=15)
    groups = random_groups(rng, g, max_groups=3)
    base = solve_gst(g, groups)
    shuffler = random.Random(8)
    for _ in range(4):
        order = list(g.triples)
        shuffler.shuffle(order)
        again = solve_gst(RdfGraph(order), groups)
        assert again.triples == base.triples
        assert again.keyword_witness == base.keyword_witness
        assert again.total_weight == base.total_weight


@pytest.fixture()
def genre_graph():
    t = [
        Triple(iri(EX + "Album1"), iri(EX + "genre"), iri(EX + "Blues")),
        Triple(iri(EX + "Album1"), iri(EX + "genre"), iri(EX + "Rock")),
        Triple(iri(EX + "Album2"), iri(EX + "genre"), iri(EX + "Reggae")),
        Triple(iri(EX + "Album2"), iri(EX + "genre"), iri(EX + "Rock")),
        Triple(iri(EX + "Artist1"), iri(EX + "recorded"), iri(EX + "Album1")),
        Triple(iri(EX + "Artist1"), iri(RDFS_LABEL), literal("Muddy Lagoon")),
        Triple(iri(EX + "Album1"), iri(EX + "year"), literal("1971")),
        Triple(iri(EX + "Album2"), iri(EX + "year"), literal("1973")),
        Triple(iri(EX + "Blues"), iri(EX + "influences"), iri(EX + "Rock")),
        Triple(iri(EX + "Artist2"), iri(EX + "recorded"), iri(EX + "Album2")),
    ]
    return RdfGraph(t)


def test_query_pipeline_end_to_end(genre_graph):
    tree, report = query_biased_snippet(genre_graph, "blues rock reggae")
    assert set(tree.keyword_witness) == {"blues", "rock", "reggae"}
    covered_nodes = set(tree.nodes())
    for witness in tree.keyword_witness.values():
        assert witness in covered_nodes
    assert report.keyword_coverage == pytest.approx(1.0)
    assert report.dropped_keywords == ()
    assert report.triple_count == len(tree.triples)
    assert report.node_count == len(tree.nodes())
    assert 0.0 < report.weighted_schema_coverage <= 1.0

    # The pipeline must agree with the oracle on an enumerable graph.
    from dsnip import map_keywords, tokenize_query
    mapped = map_keywords(genre_graph, tokenize_query("blues rock reggae"))
    oracle = bf_gst(genre_graph, KeywordGroups(groups=mapped.groups))
    assert tree.total_weight == pytest.approx(oracle.total_weight, abs=1e-9)


def test_query_pipeline_unmatched_keyword(genre_graph):
    with pytest.raises(UnmatchedKeywordsError, match="polka"):
        query_biased_snippet(genre_graph, "blues polka")
    tree, report = query_biased_snippet(genre_graph, "blues polka",
                                        drop_unmatched=True)
    assert report.dropped_keywords == ("polka",)
    assert report.keyword_coverage == pytest.approx(0.5)
    assert set(tree.keyword_witness) == {"blues"}


def test_query_pipeline_nothing_matched(genre_graph):
    with pytest.raises(UnmatchedKeywordsError):
        query_biased_snippet(genre_graph, "polka zydeco", drop_unmatched=True)


def test_query_pipeline_label_witness(genre_graph):
    tree, _ = query_biased_snippet(genre_graph, "lagoon reggae")
    lagoon = tree.keyword_witness["lagoon"]
    assert lagoon.lexical in {EX + "Artist1", "Muddy Lagoon"}


def test_query_pipeline_backend_parity(genre_graph):
    a, _ = query_biased_snippet(genre_graph, "blues rock reggae", backend="numpy")
    b, _ = query_biased_snippet(genre_graph, "blues rock reggae")
    assert a.triples == b.triples
    assert a.total_weight == b.total_weight
