"""Immutable RDF graph with derived statistics.

``RdfGraph`` keeps triples in insertion order for reproducible
serialization. All solvers work on the :class:`GraphIndex` view instead,
which renumbers nodes and triples in lexicographic order of their terms;
that makes every downstream computation independent of input file order
and gives integer ids whose natural order is the tie-breaking order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import DsnipError
from .kernels.pagerank import pagerank
from .model import IRI, LITERAL, RDF_TYPE, Node, Triple

UNIFORM = "uniform"
DEGREE_PENALIZED = "degree_penalized"
SCHEMES = (UNIFORM, DEGREE_PENALIZED)


class RdfGraph:
    """Deduplicated triple sequence plus node index; immutable after load."""

    def __init__(self, triples: Iterable[Triple]):
        ordered: list[Triple] = []
        seen: set[Triple] = set()
        for t in triples:
            if t not in seen:
                seen.add(t)
                ordered.append(t)
        self.triples: tuple[Triple, ...] = tuple(ordered)
        self._index: GraphIndex | None = None
        self._stats: dict[tuple, GraphStats] = {}

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self.index().triple_id

    def __eq__(self, other) -> bool:
        if not isinstance(other, RdfGraph):
            return NotImplemented
        return frozenset(self.triples) == frozenset(other.triples)

    def __hash__(self):
        return hash(frozenset(self.triples))

    @cached_property
    def nodes(self) -> frozenset[Node]:
        out = set()
        for t in self.triples:
            out.add(t.subject)
            out.add(t.object)
        return frozenset(out)

    @cached_property
    def node_index(self) -> Mapping[Node, tuple[int, ...]]:
        """Node -> insertion-order positions of its incident triples."""
        adj: dict[Node, list[int]] = {}
        for i, t in enumerate(self.triples):
            adj.setdefault(t.subject, []).append(i)
            if t.object != t.subject:
                adj.setdefault(t.object, []).append(i)
        return {n: tuple(ix) for n, ix in adj.items()}

    def index(self) -> "GraphIndex":
        if self._index is None:
            self._index = GraphIndex(self)
        return self._index

    def stats(self, damping: float = 0.85, tolerance: float = 1e-8,
              max_iterations: int = 100) -> "GraphStats":
        key = (damping, tolerance, max_iterations)
        if key not in self._stats:
            self._stats[key] = compute_stats(self, damping=damping, tolerance=tolerance,
                                             max_iterations=max_iterations)
        return self._stats[key]


class GraphIndex:
    """Array view of a graph, numbered in lexicographic term order."""

    def __init__(self, graph: RdfGraph):
        self.graph = graph
        self.nodes: tuple[Node, ...] = tuple(sorted(graph.nodes, key=Node.sort_key))
        self.node_id: dict[Node, int] = {n: i for i, n in enumerate(self.nodes)}
        self.n_nodes = len(self.nodes)
        self.triples: tuple[Triple, ...] = tuple(sorted(graph.triples, key=Triple.sort_key))
        self.triple_id: dict[Triple, int] = {t: i for i, t in enumerate(self.triples)}
        n_t = len(self.triples)

        self.subj = np.fromiter((self.node_id[t.subject] for t in self.triples),
                                dtype=np.int64, count=n_t)
        self.obj = np.fromiter((self.node_id[t.object] for t in self.triples),
                               dtype=np.int64, count=n_t)
        self.is_literal = np.fromiter((n.kind == LITERAL for n in self.nodes),
                                      dtype=bool, count=self.n_nodes)

        self.predicates: tuple[str, ...] = tuple(sorted({t.predicate.lexical for t in self.triples}))
        pid = {p: i for i, p in enumerate(self.predicates)}
        self.pred_of_triple = np.fromiter((pid[t.predicate.lexical] for t in self.triples),
                                          dtype=np.int64, count=n_t)

        # Classes: IRI objects of rdf:type triples.
        cls = sorted({t.object.lexical for t in self.triples
                      if t.predicate.lexical == RDF_TYPE and t.object.kind == IRI})
        self.classes: tuple[str, ...] = tuple(cls)
        cid = {c: i for i, c in enumerate(cls)}
        self.class_of_triple = np.fromiter(
            (cid[t.object.lexical]
             if t.predicate.lexical == RDF_TYPE and t.object.kind == IRI else -1
             for t in self.triples),
            dtype=np.int64, count=n_t)

        # Undirected incidence CSR; a self-loop triple appears once.
        degree = np.zeros(self.n_nodes, dtype=np.int64)
        counts = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(n_t):
            s, o = self.subj[i], self.obj[i]
            degree[s] += 1
            counts[s] += 1
            if o != s:
                degree[o] += 1
                counts[o] += 1
        self.degree = degree
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        adj_node = np.zeros(indptr[-1], dtype=np.int64)
        adj_triple = np.zeros(indptr[-1], dtype=np.int64)
        cursor = indptr[:-1].copy()
        for i in range(n_t):
            s, o = self.subj[i], self.obj[i]
            adj_node[cursor[s]] = o
            adj_triple[cursor[s]] = i
            cursor[s] += 1
            if o != s:
                adj_node[cursor[o]] = s
                adj_triple[cursor[o]] = i
                cursor[o] += 1
        self.indptr = indptr
        self.adj_node = adj_node
        self.adj_triple = adj_triple
        self._weights: dict[str, np.ndarray] = {}

    def weights(self, scheme: str) -> np.ndarray:
        """Per-triple edge weights under the given scheme, id-aligned."""
        if scheme not in SCHEMES:
            raise ValueError(f"unknown edge weight scheme: {scheme!r}")
        if scheme not in self._weights:
            if scheme == UNIFORM:
                w = np.ones(len(self.triples), dtype=np.float64)
            else:
                ds = self.degree[self.subj].astype(np.float64)
                do = self.degree[self.obj].astype(np.float64)
                w = (np.log2(1.0 + ds) + np.log2(1.0 + do)) / 2.0
            w.setflags(write=False)
            self._weights[scheme] = w
        return self._weights[scheme]


@dataclass
class GraphStats:
    """Exact counts plus PageRank over the entity (non-literal) nodes."""

    degree: Mapping[Node, int]
    class_freq: Mapping[str, int]
    prop_freq: Mapping[str, int]
    pagerank: Mapping[Node, float]
    config: tuple = (0.85, 1e-8, 100)
    # id-aligned twins consumed by the solvers
    pagerank_arr: np.ndarray = field(default=None, repr=False)
    class_freq_arr: np.ndarray = field(default=None, repr=False)
    prop_freq_arr: np.ndarray = field(default=None, repr=False)

    def top_pagerank_sum(self, count: int) -> float:
        """Sum of the ``count`` largest PageRank scores, ascending-order sum."""
        if self.pagerank_arr.size == 0 or count <= 0:
            return 0.0
        top = np.sort(self.pagerank_arr)[-count:]
        return float(np.sum(top))


def compute_stats(graph: RdfGraph, damping: float = 0.85, tolerance: float = 1e-8,
                  max_iterations: int = 100, backend: str | None = None) -> GraphStats:
    """Degrees, class/property frequencies, and power-iteration PageRank.

    PageRank runs on the undirected entity adjacency: every triple whose
    endpoints are both non-literal adds one transition in each direction
    (a self-loop adds two on the diagonal). Literals are excluded; entities
    without entity neighbors hold teleport-only mass.
    """
    if len(graph) == 0:
        raise DsnipError("cannot compute statistics of an empty graph")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    idx = graph.index()

    degree = {n: int(idx.degree[i]) for i, n in enumerate(idx.nodes)}

    instances: dict[str, set[int]] = {c: set() for c in idx.classes}
    for i, t in enumerate(idx.triples):
        c = idx.class_of_triple[i]
        if c >= 0:
            instances[idx.classes[c]].add(int(idx.subj[i]))
    class_freq = {c: len(s) for c, s in instances.items()}
    class_freq_arr = np.fromiter((class_freq[c] for c in idx.classes),
                                 dtype=np.float64, count=len(idx.classes))

    prop_counts = np.bincount(idx.pred_of_triple, minlength=len(idx.predicates)) \
        if len(idx.predicates) else np.zeros(0, dtype=np.int64)
    prop_freq = {p: int(prop_counts[i]) for i, p in enumerate(idx.predicates)}
    prop_freq_arr = prop_counts.astype(np.float64)

    entity_ids = np.nonzero(~idx.is_literal)[0]
    rank = np.full(idx.n_nodes, -1, dtype=np.int64)
    rank[entity_ids] = np.arange(entity_ids.size)
    both_entity = ~(idx.is_literal[idx.subj] | idx.is_literal[idx.obj])
    es = rank[idx.subj[both_entity]]
    eo = rank[idx.obj[both_entity]]
    src = np.concatenate([es, eo])
    dst = np.concatenate([eo, es])
    n_e = int(entity_ids.size)
    out_deg = np.bincount(src, minlength=n_e).astype(np.float64) if n_e else np.zeros(0)
    pr_small = pagerank(src, dst, out_deg, n_e, damping, tolerance, max_iterations,
                        backend=backend)
    pr_full = np.zeros(idx.n_nodes, dtype=np.float64)
    pr_full[entity_ids] = pr_small
    pr_full.setflags(write=False)
    pr_map = {idx.nodes[int(i)]: float(pr_full[int(i)]) for i in entity_ids}

    return GraphStats(degree=degree, class_freq=class_freq, prop_freq=prop_freq,
                      pagerank=pr_map, config=(damping, tolerance, max_iterations),
                      pagerank_arr=pr_full, class_freq_arr=class_freq_arr,
                      prop_freq_arr=prop_freq_arr)


def edge_weight(graph: RdfGraph, triple: Triple, scheme: str = DEGREE_PENALIZED) -> float:
    """Weight of one edge; strictly positive (endpoint degrees are >= 1)."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown edge weight scheme: {scheme!r}")
    idx = graph.index()
    if triple not in idx.triple_id:
        raise ValueError(f"triple not in graph: {triple}")
    if scheme == UNIFORM:
        return 1.0
    ds = int(idx.degree[idx.node_id[triple.subject]])
    do = int(idx.degree[idx.node_id[triple.object]])
    return (math.log2(1 + ds) + math.log2(1 + do)) / 2.0
