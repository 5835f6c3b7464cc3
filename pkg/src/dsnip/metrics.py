"""Snippet evaluation measurements and DOT export.

Weighted schema coverage is the fraction of total class/property
frequency mass represented in a snippet: classes are weighted by their
instance counts and properties by their triple counts, over one shared
denominator. DOT export renders any triple set as a directed node-link
diagram with stable hashed node ids.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DsnipError
from .graph import RdfGraph
from .model import LITERAL, Node, Triple
from .ntriples import term_to_text


@dataclass(frozen=True)
class CoverageReport:
    """Evaluation measurements for one snippet.

    keyword_coverage is the fraction of query keywords witnessed by the
    snippet; it is None for query-independent snippets and omitted from
    JSON in that case.
    """

    weighted_schema_coverage: float
    keyword_coverage: float | None
    triple_count: int
    node_count: int
    dropped_keywords: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        out: dict = {"weightedSchemaCoverage": round(self.weighted_schema_coverage, 4)}
        if self.keyword_coverage is not None:
            out["keywordCoverage"] = round(self.keyword_coverage, 4)
        out["tripleCount"] = self.triple_count
        out["nodeCount"] = self.node_count
        out["droppedKeywords"] = list(self.dropped_keywords)
        return out


def _covered_masses(graph: RdfGraph, triples) -> tuple[float, float]:
    """Covered (class mass, property mass) for a triple set, canonically ordered."""
    idx = graph.index()
    stats = graph.stats()
    try:
        ids = sorted(idx.triple_id[t] for t in triples)
    except KeyError as exc:
        raise DsnipError("triple outside graph", stage="metrics") from exc
    if not ids:
        return 0.0, 0.0
    arr = np.asarray(ids, dtype=np.int64)
    cls = np.unique(idx.class_of_triple[arr])
    cls = cls[cls >= 0]
    preds = np.unique(idx.pred_of_triple[arr])
    return float(np.sum(stats.class_freq_arr[cls])), float(np.sum(stats.prop_freq_arr[preds]))


def weighted_schema_coverage(graph: RdfGraph, triples) -> float:
    """Covered class+property frequency mass over the dataset's total mass."""
    stats = graph.stats()
    total = float(np.sum(stats.class_freq_arr)) + float(np.sum(stats.prop_freq_arr))
    if total <= 0.0:
        raise DsnipError("no classes and no triples: coverage undefined",
                         stage="metrics")
    cc, pc = _covered_masses(graph, triples)
    return (cc + pc) / total


def schema_coverage_parts(graph: RdfGraph, triples) -> tuple[float, float]:
    """Per-kind ratios: (covered class mass / total class mass,
    covered property mass / total triple count)."""
    stats = graph.stats()
    tot_class = float(np.sum(stats.class_freq_arr))
    tot_prop = float(np.sum(stats.prop_freq_arr))
    cc, pc = _covered_masses(graph, triples)
    return (cc / tot_class if tot_class > 0.0 else 0.0,
            pc / tot_prop if tot_prop > 0.0 else 0.0)


def build_coverage_report(graph: RdfGraph, triples, nodes=None, *,
                          keyword_coverage: float | None = None,
                          dropped: tuple[str, ...] = ()) -> CoverageReport:
    """Assemble a CoverageReport; nodes may be passed explicitly so that a
    zero-triple snippet can still report its single witness node."""
    triples = tuple(triples)
    if nodes is None:
        nodes = {n for t in triples for n in t.nodes()}
    return CoverageReport(
        weighted_schema_coverage=weighted_schema_coverage(graph, triples),
        keyword_coverage=keyword_coverage,
        triple_count=len(triples),
        node_count=len(set(nodes)),
        dropped_keywords=tuple(dropped),
    )


def _dot_id(node: Node) -> str:
    digest = hashlib.sha1(term_to_text(node).encode("utf-8")).hexdigest()
    return "n" + digest[:12]


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _dot_label(text: str, max_length: int) -> str:
    if len(text) > max_length:
        text = text[:max(max_length - 1, 0)] + "\u2026"
    return _dot_escape(text)


def to_dot(triples, max_label_length: int = 40) -> str:
    """Render a triple set as a DOT digraph.

    Node ids are stable hashes of term texts, literals are boxes, IRIs
    and blank nodes are ellipses, and edge labels are predicate local
    names. Output order is the lexical sort order.
    """
    triples = sorted(set(triples), key=Triple.sort_key)
    if not triples:
        return "digraph snippet { }\n"
    nodes = sorted({n for t in triples for n in (t.subject, t.object)},
                   key=Node.sort_key)
    lines = ["digraph snippet {"]
    for node in nodes:
        shape = "box" if node.kind == LITERAL else "ellipse"
        label = _dot_label(node.lexical, max_label_length)
        lines.append(f'  {_dot_id(node)} [label="{label}", shape={shape}];')
    for t in triples:
        label = _dot_label(t.predicate.local_name() or t.predicate.lexical,
                           max_label_length)
        lines.append(f'  {_dot_id(t.subject)} -> {_dot_id(t.object)} '
                     f'[label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
