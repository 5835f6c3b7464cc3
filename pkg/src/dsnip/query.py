"""Query tokenization and keyword-to-node mapping.

A free-form query becomes an ordered list of lowercase keywords after
stop-word removal and deduplication. Each keyword is then mapped to the
set of graph nodes whose local name, literal text, or label text
contains it case-insensitively; those sets are the groups a query-biased
snippet must cover.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import EmptyQueryError, TooManyKeywordsError
from .graph import RdfGraph
from .model import IRI, LITERAL, RDFS_LABEL, Node

MATCH_LOCAL_NAME = "localName"
MATCH_LITERAL = "literalText"
MATCH_LABEL = "labelText"
MATCH_FIELDS = frozenset({MATCH_LOCAL_NAME, MATCH_LITERAL, MATCH_LABEL})

ENV_STOPWORDS = "DSNIP_STOPWORDS"
DEFAULT_MAX_KEYWORDS = 10

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def load_stopwords(path: str | os.PathLike | None = None) -> frozenset[str]:
    """Load a stop-word file: one word per line, `#` comments and blanks ignored.

    Resolution order: explicit path, then the DSNIP_STOPWORDS environment
    variable, then the packaged default list.
    """
    if path is None:
        path = os.environ.get(ENV_STOPWORDS) or None
    if path is None:
        text = (resources.files("dsnip") / "data" / "stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


@dataclass(frozen=True, slots=True)
class Query:
    """A parsed query: raw text plus its ordered, deduplicated keywords."""

    text: str
    keywords: tuple[str, ...]


def tokenize_query(text: str, stopwords: frozenset[str] | None = None,
                   max_keywords: int = DEFAULT_MAX_KEYWORDS) -> Query:
    """Split on non-alphanumeric boundaries, lowercase, drop stop words, dedupe.

    First occurrence order is preserved. Raises EmptyQueryError when
    nothing survives and TooManyKeywordsError above the keyword cap.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    if not text.strip():
        raise EmptyQueryError("query is empty")
    seen: dict[str, None] = {}
    for token in _TOKEN.findall(text.lower()):
        if token not in stopwords:
            seen.setdefault(token, None)
    keywords = tuple(seen)
    if not keywords:
        raise EmptyQueryError("query is empty after stop-word removal")
    if len(keywords) > max_keywords:
        raise TooManyKeywordsError(
            f"query has {len(keywords)} keywords (maximum {max_keywords}); "
            "shorten the query")
    return Query(text=text, keywords=keywords)


@dataclass(frozen=True)
class KeywordGroups:
    """Keyword groups over a graph: matched node sets plus unmatched keywords.

    ``groups`` keys follow query keyword order; each group is sorted by
    node lexical form. groups keys and ``unmatched`` together equal the
    query's keywords.
    """

    groups: dict[str, tuple[Node, ...]]
    unmatched: tuple[str, ...] = field(default_factory=tuple)

    @property
    def keywords(self) -> tuple[str, ...]:
        return tuple(self.groups) + self.unmatched


def _searchable_texts(graph: RdfGraph, match_fields: frozenset[str]):
    """Per-node list of lowercased searchable strings under the enabled fields."""
    texts: dict[Node, list[str]] = {node: [] for node in graph.nodes}
    for node in graph.nodes:
        if MATCH_LOCAL_NAME in match_fields and node.kind == IRI:
            local = node.local_name()
            if local:
                texts[node].append(local.lower())
        if MATCH_LITERAL in match_fields and node.kind == LITERAL:
            texts[node].append(node.lexical.lower())
    if MATCH_LABEL in match_fields:
        for triple in graph.triples:
            if (triple.predicate.lexical == RDFS_LABEL
                    and triple.object.kind == LITERAL):
                texts[triple.subject].append(triple.object.lexical.lower())
    return texts


def map_keywords(graph: RdfGraph, query: Query,
                 match_fields: frozenset[str] = MATCH_FIELDS) -> KeywordGroups:
    """Map each keyword to the nodes containing it in any enabled field.

    Unmatched keywords are reported, not fatal. Group node order is the
    lexical sort order, so the result is independent of triple order.
    """
    unknown = set(match_fields) - MATCH_FIELDS
    if unknown:
        raise ValueError(f"unknown match fields: {sorted(unknown)}")
    texts = _searchable_texts(graph, frozenset(match_fields))
    groups: dict[str, tuple[Node, ...]] = {}
    unmatched: list[str] = []
    for keyword in query.keywords:
        needle = keyword.lower()
        hits = [node for node, fields in texts.items()
                if any(needle in t for t in fields)]
        if hits:
            groups[keyword] = tuple(sorted(hits, key=Node.sort_key))
        else:
            unmatched.append(keyword)
    return KeywordGroups(groups=groups, unmatched=tuple(unmatched))
