"""Exact group Steiner trees and the query-biased snippet pipeline.

A query-biased snippet is a minimum-total-weight tree spanning at least
one mapped node per query keyword. The solver delegates to the
best-first dynamic program in kernels.gstcore after checking that some
connected component touches every group. bf_gst is the enumeration
oracle used to certify optimality on small instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (DsnipError, EmptyQueryError, EnumerationLimitError,
                     NoConnectedCoverError, TooManyKeywordsError,
                     UnmatchedKeywordsError)
from .graph import DEGREE_PENALIZED, RdfGraph
from .kernels import gstcore
from .metrics import CoverageReport, build_coverage_report
from .model import Node, Triple
from .query import MATCH_FIELDS, KeywordGroups, map_keywords, tokenize_query

MAX_GROUPS = 10


@dataclass(frozen=True)
class SnippetTree:
    """A group-covering tree: triples, total weight, and one witness per keyword.

    The triples form a connected acyclic graph; a zero-triple tree is a
    single node that alone covers every group.
    """

    triples: tuple[Triple, ...]
    total_weight: float
    keyword_witness: dict[str, Node] = field(default_factory=dict)

    def nodes(self) -> tuple[Node, ...]:
        out = {n for t in self.triples for n in (t.subject, t.object)}
        out.update(self.keyword_witness.values())
        return tuple(sorted(out, key=Node.sort_key))


def _group_ids(graph: RdfGraph, groups: KeywordGroups):
    """Validate groups and return (keywords, per-group sorted id arrays)."""
    if groups.unmatched:
        raise UnmatchedKeywordsError(groups.unmatched)
    keywords = tuple(groups.groups)
    if not keywords:
        raise EmptyQueryError("no keyword groups to cover")
    if len(keywords) > MAX_GROUPS:
        raise TooManyKeywordsError(
            f"{len(keywords)} keyword groups (maximum {MAX_GROUPS}); "
            "shorten the query")
    empty = tuple(k for k, g in groups.groups.items() if not g)
    if empty:
        raise UnmatchedKeywordsError(empty)
    idx = graph.index()
    id_groups = []
    for keyword in keywords:
        try:
            ids = sorted(idx.node_id[n] for n in groups.groups[keyword])
        except KeyError as exc:
            raise DsnipError(f"group node for {keyword!r} not in graph",
                             stage="gst") from exc
        id_groups.append(np.asarray(ids, dtype=np.int64))
    return keywords, id_groups


def _component_labels(idx) -> np.ndarray:
    """Connected-component label per node id (undirected)."""
    parent = np.arange(len(idx.nodes), dtype=np.int64)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for i in range(len(idx.triples)):
        a, b = find(int(idx.subj[i])), find(int(idx.obj[i]))
        if a != b:
            parent[max(a, b)] = min(a, b)
    return np.asarray([find(i) for i in range(len(parent))], dtype=np.int64)


def _check_connected_cover(idx, keywords, id_groups):
    """Raise NoConnectedCoverError unless one component intersects every group."""
    labels = _component_labels(idx)
    best_covered: tuple[str, ...] | None = None
    for comp in np.unique(labels):
        covered = tuple(k for k, ids in zip(keywords, id_groups)
                        if np.any(labels[ids] == comp))
        if best_covered is None or len(covered) > len(best_covered):
            best_covered = covered
        if len(covered) == len(keywords):
            return
    assert best_covered is not None
    missing = tuple(k for k in keywords if k not in best_covered)
    raise NoConnectedCoverError(missing)


def solve_gst(graph: RdfGraph, groups: KeywordGroups,
              scheme: str = DEGREE_PENALIZED,
              backend: str | None = None, trace=None) -> SnippetTree:
    """Return the minimum-weight tree spanning one node per keyword group.

    trace, when given, receives one dict per settled solver state
    (weight, root lexical form, covered keywords) and forces the
    pure-Python kernel.
    """
    keywords, id_groups = _group_ids(graph, groups)
    idx = graph.index()
    _check_connected_cover(idx, keywords, id_groups)
    k = len(keywords)
    offsets = np.zeros(k + 1, dtype=np.int64)
    for i, ids in enumerate(id_groups):
        offsets[i + 1] = offsets[i] + len(ids)
    group_nodes = np.concatenate(id_groups) if id_groups else np.empty(0, np.int64)
    weights = idx.weights(scheme)

    kernel_trace = None
    if trace is not None:
        def kernel_trace(w: float, v: int, mask: int):
            covered = [keywords[g] for g in range(k) if (mask >> g) & 1]
            trace({"weight": w, "root": idx.nodes[v].lexical, "covered": covered})

    found, _, tree_ids, witness_ids = gstcore.solve_states(
        idx.indptr, idx.adj_node, idx.adj_triple, weights,
        idx.subj, idx.obj, offsets, group_nodes, k,
        backend=backend, trace=kernel_trace)
    if not found:
        raise NoConnectedCoverError(keywords)
    tree_ids = np.unique(tree_ids)
    total = float(np.sum(weights[tree_ids]))
    triples = tuple(idx.triples[i] for i in tree_ids)
    witness = {keywords[g]: idx.nodes[int(witness_ids[g])] for g in range(k)}
    return SnippetTree(triples=triples, total_weight=total,
                       keyword_witness=witness)


def _popcount(values: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(values).astype(np.int64)
    v = values.astype(np.uint64)
    out = np.zeros(v.shape, dtype=np.int64)
    while np.any(v):
        out += (v & 1).astype(np.int64)
        v >>= np.uint64(1)
    return out


def _set_lex_key(mask: int):
    return tuple(b for b in range(mask.bit_length()) if (mask >> b) & 1)


def bf_gst(graph: RdfGraph, groups: KeywordGroups,
           scheme: str = DEGREE_PENALIZED,
           max_triples: int = 16) -> SnippetTree:
    """Brute-force oracle: enumerate every triple subset, keep connected
    acyclic covers, return the minimum-weight one (ties: smallest triple
    set in lexicographic order)."""
    keywords, id_groups = _group_ids(graph, groups)
    idx = graph.index()
    n_triples = len(idx.triples)
    if n_triples > max_triples:
        raise EnumerationLimitError(
            f"{n_triples} triples exceeds the enumeration guard ({max_triples})")
    n_nodes = len(idx.nodes)
    if n_nodes > 62:
        raise EnumerationLimitError(f"{n_nodes} nodes exceeds the bitmask width")

    common = set(id_groups[0].tolist())
    for ids in id_groups[1:]:
        common &= set(ids.tolist())
    if common:
        v = idx.nodes[min(common)]
        return SnippetTree(triples=(), total_weight=0.0,
                           keyword_witness={k: v for k in keywords})

    weights = idx.weights(scheme)
    masks = np.arange(1 << n_triples, dtype=np.int64)
    w = np.zeros(masks.shape, dtype=np.float64)
    nodemask = np.zeros(masks.shape, dtype=np.int64)
    edges = np.zeros(masks.shape, dtype=np.int64)
    for b in range(n_triples):
        bit = (masks >> b) & 1
        w += bit * weights[b]
        tmask = (1 << int(idx.subj[b])) | (1 << int(idx.obj[b]))
        nodemask |= np.where(bit.astype(bool), tmask, 0)
        edges += bit

    ok = masks > 0
    for ids in id_groups:
        gmask = 0
        for v in ids.tolist():
            gmask |= 1 << v
        ok &= (nodemask & gmask) != 0
    ok &= _popcount(nodemask) == edges + 1

    cand = masks[ok]
    if cand.size == 0:
        _check_connected_cover(idx, keywords, id_groups)
        raise NoConnectedCoverError(keywords)
    cw = w[ok]
    order = np.argsort(cw, kind="stable")
    i = 0
    while i < order.size:
        j = i
        while j < order.size and cw[order[j]] == cw[order[i]]:
            j += 1
        tied = sorted((int(cand[order[p]]) for p in range(i, j)),
                      key=_set_lex_key)
        for mask in tied:
            ids = [b for b in range(n_triples) if (mask >> b) & 1]
            parent = {}

            def find(x):
                while parent.setdefault(x, x) != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            acyclic = True
            for b in ids:
                ra, rb = find(int(idx.subj[b])), find(int(idx.obj[b]))
                if ra == rb:
                    acyclic = False
                    break
                parent[max(ra, rb)] = min(ra, rb)
            if not acyclic:
                continue
            arr = np.asarray(ids, dtype=np.int64)
            tree_nodes = set(np.concatenate((idx.subj[arr], idx.obj[arr])).tolist())
            witness = {}
            for kw, gids in zip(keywords, id_groups):
                witness[kw] = idx.nodes[min(tree_nodes & set(gids.tolist()))]
            return SnippetTree(
                triples=tuple(idx.triples[b] for b in ids),
                total_weight=float(np.sum(weights[arr])),
                keyword_witness=witness)
        i = j
    _check_connected_cover(idx, keywords, id_groups)
    raise NoConnectedCoverError(keywords)


def query_biased_snippet(graph: RdfGraph, query_text: str, *,
                         stopwords: frozenset[str] | None = None,
                         max_keywords: int = MAX_GROUPS,
                         match_fields: frozenset[str] = MATCH_FIELDS,
                         scheme: str = DEGREE_PENALIZED,
                         drop_unmatched: bool = False,
                         backend: str | None = None,
                         trace=None) -> tuple[SnippetTree, CoverageReport]:
    """Full pipeline: tokenize, map keywords, solve the GST, measure coverage.

    Unmatched keywords are a hard error unless drop_unmatched is set, in
    which case the snippet covers the matched subset and the report
    lists what was dropped.
    """
    query = tokenize_query(query_text, stopwords, max_keywords)
    mapped = map_keywords(graph, query, match_fields)
    if mapped.unmatched and not drop_unmatched:
        raise UnmatchedKeywordsError(mapped.unmatched)
    if not mapped.groups:
        raise UnmatchedKeywordsError(mapped.unmatched)
    tree = solve_gst(graph, KeywordGroups(groups=mapped.groups),
                     scheme=scheme, backend=backend, trace=trace)
    report = build_coverage_report(
        graph, tree.triples, tree.nodes(),
        keyword_coverage=len(mapped.groups) / len(query.keywords),
        dropped=mapped.unmatched)
    return tree, report
