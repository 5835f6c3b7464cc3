"""dsnip: snippet generation and evaluation for RDF dataset search.

Parse N-Triples into an immutable graph, generate query-biased snippets
(exact minimum-weight group Steiner trees over keyword groups) and
query-independent illustrative snippets (greedy size-constrained
coverage/centrality maximization), and measure weighted schema coverage.
"""
from .annotations import (ALL_LABELS, CONTENT_LABELS, METADATA_LABELS,
                          QUERY_TYPES, AnnotationRecord, CorpusStats,
                          category_distribution, load_annotations)
from .errors import (AnnotationLoadError, DsnipError, EmptyQueryError,
                     EnumerationLimitError, NoConnectedCoverError, ParseError,
                     TooManyKeywordsError, UnmatchedKeywordsError)
from .graph import (DEGREE_PENALIZED, SCHEMES, UNIFORM, GraphIndex, GraphStats,
                    RdfGraph, compute_stats, edge_weight)
from .gst import MAX_GROUPS, SnippetTree, bf_gst, query_biased_snippet, solve_gst
from .illustrative import (IllusnipConfig, ScoreBreakdown, Snippet, bf_illusnip,
                           illustrative_snippet, score_snippet)
from .kernels import BACKENDS, ENV_VAR, HAS_NUMBA, resolve_backend
from .metrics import (CoverageReport, build_coverage_report,
                      schema_coverage_parts, to_dot, weighted_schema_coverage)
from .model import BLANK, IRI, LITERAL, RDF_TYPE, RDFS_LABEL, Node, Triple, blank, iri, literal
from .ntriples import (ParseReport, parse_ntriples, parse_ntriples_file,
                       serialize, term_to_text, triple_to_line)
from .query import (DEFAULT_MAX_KEYWORDS, MATCH_FIELDS, MATCH_LABEL,
                    MATCH_LITERAL, MATCH_LOCAL_NAME, KeywordGroups, Query,
                    load_stopwords, map_keywords, tokenize_query)

__version__ = "0.1.0"

__all__ = [
    "ALL_LABELS", "CONTENT_LABELS", "METADATA_LABELS", "QUERY_TYPES",
    "AnnotationRecord", "CorpusStats", "category_distribution",
    "load_annotations",
    "AnnotationLoadError", "DsnipError", "EmptyQueryError",
    "EnumerationLimitError", "NoConnectedCoverError", "ParseError",
    "TooManyKeywordsError", "UnmatchedKeywordsError",
    "DEGREE_PENALIZED", "SCHEMES", "UNIFORM", "GraphIndex", "GraphStats",
    "RdfGraph", "compute_stats", "edge_weight",
    "MAX_GROUPS", "SnippetTree", "bf_gst", "query_biased_snippet", "solve_gst",
    "IllusnipConfig", "ScoreBreakdown", "Snippet", "bf_illusnip",
    "illustrative_snippet", "score_snippet",
    "BACKENDS", "ENV_VAR", "HAS_NUMBA", "resolve_backend",
    "CoverageReport", "build_coverage_report", "schema_coverage_parts",
    "to_dot", "weighted_schema_coverage",
    "BLANK", "IRI", "LITERAL", "RDF_TYPE", "RDFS_LABEL", "Node", "Triple",
    "blank", "iri", "literal",
    "ParseReport", "parse_ntriples", "parse_ntriples_file", "serialize",
    "term_to_text", "triple_to_line",
    "DEFAULT_MAX_KEYWORDS", "MATCH_FIELDS", "MATCH_LABEL", "MATCH_LITERAL",
    "MATCH_LOCAL_NAME", "KeywordGroups", "Query", "load_stopwords",
    "map_keywords", "tokenize_query",
    "__version__",
]
