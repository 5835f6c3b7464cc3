"""Query-independent illustrative snippets.

A snippet is a connected subgraph of at most k triples scoring
alpha * classCoverage + beta * propertyCoverage + gamma * centrality,
each term normalized into [0,1]: coverage terms are frequency-mass
ratios and centrality is the snippet's PageRank mass over the top-(2k)
PageRank mass of the dataset (2k is the most distinct nodes k triples
can have). The generator greedily grows one snippet from each of the
top-m seed triples and keeps the best; bf_illusnip enumerates all
connected subsets as the optimality oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DsnipError, EnumerationLimitError
from .graph import RdfGraph
from .kernels import growth
from .model import Triple


@dataclass(frozen=True, slots=True)
class IllusnipConfig:
    """Snippet budget k, score weights (must sum to 1), and restart count."""

    k: int = 20
    alpha: float = 1.0 / 3.0
    beta: float = 1.0 / 3.0
    gamma: float = 1.0 / 3.0
    seed_count: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise DsnipError("k must be at least 1", stage="config")
        if self.seed_count < 1:
            raise DsnipError("seed count must be at least 1", stage="config")
        if min(self.alpha, self.beta, self.gamma) < 0.0:
            raise DsnipError("score weights must be non-negative", stage="config")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-9:
            raise DsnipError("score weights must sum to 1", stage="config")


@dataclass(frozen=True, slots=True)
class ScoreBreakdown:
    class_coverage: float
    property_coverage: float
    centrality: float

    def to_json_dict(self) -> dict:
        return {"classCoverage": round(self.class_coverage, 4),
                "propertyCoverage": round(self.property_coverage, 4),
                "centrality": round(self.centrality, 4)}


@dataclass(frozen=True, slots=True)
class Snippet:
    """A connected snippet of at most k triples with its score breakdown."""

    triples: tuple[Triple, ...]
    score: float
    breakdown: ScoreBreakdown

    def nodes(self):
        out = {n for t in self.triples for n in (t.subject, t.object)}
        return tuple(sorted(out, key=lambda n: n.sort_key()))


def _combine(cc: float, pc: float, ce: float, tot_class: float,
             tot_prop: float, top_pr: float, config: IllusnipConfig):
    """Shared normalization: identical float sequence everywhere scores are
    produced, so comparisons across code paths are exact."""
    class_cov = cc / tot_class if tot_class > 0.0 else 0.0
    prop_cov = pc / tot_prop if tot_prop > 0.0 else 0.0
    centrality = min(ce / top_pr, 1.0) if top_pr > 0.0 else 0.0
    score = 0.0
    if tot_class > 0.0:
        score += config.alpha * (cc / tot_class)
    if tot_prop > 0.0:
        score += config.beta * (pc / tot_prop)
    if top_pr > 0.0:
        c = ce / top_pr
        if c > 1.0:
            c = 1.0
        score += config.gamma * c
    return score, ScoreBreakdown(class_cov, prop_cov, centrality)


def _score_ids(idx, stats, arr: np.ndarray, tot_class: float, tot_prop: float,
               top_pr: float, config: IllusnipConfig):
    """Canonical scoring of a triple id array; every scoring path funnels
    through here so comparisons between paths are bit-exact."""
    if arr.size == 0:
        return _combine(0.0, 0.0, 0.0, tot_class, tot_prop, top_pr, config)
    cls = np.unique(idx.class_of_triple[arr])
    cls = cls[cls >= 0]
    cc = float(np.sum(stats.class_freq_arr[cls]))
    preds = np.unique(idx.pred_of_triple[arr])
    pc = float(np.sum(stats.prop_freq_arr[preds]))
    nodes = np.unique(np.concatenate((idx.subj[arr], idx.obj[arr])))
    entities = nodes[~idx.is_literal[nodes]]
    ce = float(np.sum(stats.pagerank_arr[entities]))
    return _combine(cc, pc, ce, tot_class, tot_prop, top_pr, config)


def score_snippet(graph: RdfGraph, triples,
                  config: IllusnipConfig | None = None
                  ) -> tuple[float, ScoreBreakdown]:
    """Score any triple subset of the graph (connectivity not required here).

    Sums run in ascending id order, so rescoring a snippet reproduces
    its score bit for bit.
    """
    if config is None:
        config = IllusnipConfig()
    idx = graph.index()
    stats = graph.stats()
    try:
        ids = sorted(idx.triple_id[t] for t in triples)
    except KeyError as exc:
        raise DsnipError("triple outside graph", stage="illusnip") from exc
    tot_class = float(np.sum(stats.class_freq_arr))
    tot_prop = float(np.sum(stats.prop_freq_arr))
    top_pr = stats.top_pagerank_sum(2 * config.k)
    return _score_ids(idx, stats, np.asarray(ids, dtype=np.int64),
                      tot_class, tot_prop, top_pr, config)


def _singleton_scores(idx, stats, config: IllusnipConfig) -> np.ndarray:
    """Vectorized score of every 1-triple snippet (used only to rank seeds)."""
    tot_class = float(np.sum(stats.class_freq_arr))
    tot_prop = float(np.sum(stats.prop_freq_arr))
    top_pr = stats.top_pagerank_sum(2 * config.k)
    n = len(idx.triples)
    scores = np.zeros(n, dtype=np.float64)
    if tot_class > 0.0:
        cw = np.where(idx.class_of_triple >= 0,
                      stats.class_freq_arr[np.maximum(idx.class_of_triple, 0)],
                      0.0)
        scores += config.alpha * (cw / tot_class)
    if tot_prop > 0.0:
        scores += config.beta * (stats.prop_freq_arr[idx.pred_of_triple] / tot_prop)
    if top_pr > 0.0:
        pr = np.where(idx.is_literal, 0.0, stats.pagerank_arr)
        ce = pr[idx.subj] + np.where(idx.obj != idx.subj, pr[idx.obj], 0.0)
        scores += config.gamma * np.minimum(ce / top_pr, 1.0)
    return scores


def illustrative_snippet(graph: RdfGraph,
                         config: IllusnipConfig | None = None,
                         backend: str | None = None) -> Snippet:
    """Greedy-with-restarts snippet generation.

    Seeds are the top-m triples by singleton score (ties: smaller id);
    each grows greedily to at most k triples; the best grown snippet
    wins (ties: lexicographically smaller triple set).
    """
    if config is None:
        config = IllusnipConfig()
    idx = graph.index()
    if not idx.triples:
        raise DsnipError("graph has no triples", stage="illusnip")
    stats = graph.stats()
    tot_class = float(np.sum(stats.class_freq_arr))
    tot_prop = float(np.sum(stats.prop_freq_arr))
    top_pr = stats.top_pagerank_sum(2 * config.k)
    pr = np.where(idx.is_literal, 0.0, stats.pagerank_arr)

    scores = _singleton_scores(idx, stats, config)
    order = np.lexsort((np.arange(scores.shape[0]), -scores))
    seeds = order[:config.seed_count]

    best: tuple[float, tuple[int, ...]] | None = None
    for seed in seeds:
        grown = growth.grow(
            idx.indptr, idx.adj_triple, idx.subj, idx.obj,
            idx.class_of_triple, idx.pred_of_triple,
            stats.class_freq_arr, stats.prop_freq_arr, pr,
            tot_class, tot_prop, top_pr,
            config.alpha, config.beta, config.gamma,
            config.k, int(seed), backend=backend)
        ids = tuple(sorted(int(i) for i in grown))
        score, _ = _score_ids(idx, stats, np.asarray(ids, dtype=np.int64),
                              tot_class, tot_prop, top_pr, config)
        if best is None or score > best[0] or (score == best[0] and ids < best[1]):
            best = (score, ids)
    assert best is not None
    score, breakdown = _score_ids(idx, stats, np.asarray(best[1], dtype=np.int64),
                                  tot_class, tot_prop, top_pr, config)
    return Snippet(triples=tuple(idx.triples[i] for i in best[1]),
                   score=score, breakdown=breakdown)


def bf_illusnip(graph: RdfGraph, config: IllusnipConfig | None = None,
                max_triples: int = 16) -> Snippet:
    """Enumerate every connected subset of at most k triples; return the
    best (ties: lexicographically smaller triple set)."""
    if config is None:
        config = IllusnipConfig()
    idx = graph.index()
    n = len(idx.triples)
    if n == 0:
        raise DsnipError("graph has no triples", stage="illusnip")
    if n > max_triples:
        raise EnumerationLimitError(
            f"{n} triples exceeds the enumeration guard ({max_triples})")
    if config.k > 5:
        raise EnumerationLimitError(f"k={config.k} exceeds the enumeration guard (5)")
    stats = graph.stats()
    tot_class = float(np.sum(stats.class_freq_arr))
    tot_prop = float(np.sum(stats.prop_freq_arr))
    top_pr = stats.top_pagerank_sum(2 * config.k)

    best: tuple[float, tuple[int, ...]] | None = None
    for size in range(1, config.k + 1):
        for combo in itertools.combinations(range(n), size):
            parent: dict[int, int] = {}

            def find(x: int) -> int:
                while parent.setdefault(x, x) != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            merged = 0
            for b in combo:
                ra, rb = find(int(idx.subj[b])), find(int(idx.obj[b]))
                if ra != rb:
                    parent[ra] = rb
                    merged += 1
            if len(parent) - merged != 1:
                continue
            score, _ = _score_ids(idx, stats, np.asarray(combo, dtype=np.int64),
                                  tot_class, tot_prop, top_pr, config)
            if best is None or score > best[0] or (score == best[0] and combo < best[1]):
                best = (score, combo)
    assert best is not None
    score, breakdown = score_snippet(
        graph, (idx.triples[b] for b in best[1]), config)
    return Snippet(triples=tuple(idx.triples[b] for b in best[1]),
                   score=score, breakdown=breakdown)
