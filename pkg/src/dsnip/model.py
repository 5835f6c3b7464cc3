"""RDF terms and triples.

Nodes and triples are immutable values; equality and hashing are structural,
so a graph can deduplicate triples and use nodes as dictionary keys.
"""
from __future__ import annotations

from dataclasses import dataclass

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

_KIND_ORDER = {IRI: 0, BLANK: 1, LITERAL: 2}
_WHITESPACE = (" ", "\t", "\n", "\r", "\f", "\v")


@dataclass(frozen=True, slots=True)
class Node:
    """One RDF term: an IRI, a blank node, or a literal.

    ``lang`` and ``datatype`` apply to literals only and are mutually
    exclusive; plain literals leave both unset.
    """

    kind: str
    lexical: str
    lang: str | None = None
    datatype: str | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown node kind: {self.kind!r}")
        if self.kind == IRI:
            if not self.lexical:
                raise ValueError("IRI must be non-empty")
            if any(c in self.lexical for c in _WHITESPACE):
                raise ValueError(f"IRI contains whitespace: {self.lexical!r}")
        if self.kind != LITERAL and (self.lang or self.datatype):
            raise ValueError("only literals carry a language tag or datatype")
        if self.lang and self.datatype:
            raise ValueError("a literal has either a language tag or a datatype")

    def sort_key(self) -> tuple:
        """Total order used for deterministic tie-breaking everywhere.

        Primarily the lexical form; kind and literal qualifier break the
        rare cross-kind duplicates (IRI "a" vs literal "a").
        """
        return (self.lexical, _KIND_ORDER[self.kind], self.lang or "", self.datatype or "")

    def local_name(self) -> str | None:
        """Text after the last '/' or '#' of an IRI; None for other kinds."""
        if self.kind != IRI:
            return None
        cut = max(self.lexical.rfind("/"), self.lexical.rfind("#"))
        return self.lexical[cut + 1:]

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL


def iri(value: str) -> Node:
    return Node(IRI, value)

def blank(label: str) -> Node:
    return Node(BLANK, label)

def literal(value: str, lang: str | None = None, datatype: str | None = None) -> Node:
    return Node(LITERAL, value, lang, datatype)


@dataclass(frozen=True, slots=True)
class Triple:
    """A directed, predicate-labeled edge of the content graph."""

    subject: Node
    predicate: Node
    object: Node

    def __post_init__(self):
        if self.subject.kind == LITERAL:
            raise ValueError("triple subject cannot be a literal")
        if self.predicate.kind != IRI:
            raise ValueError("triple predicate must be an IRI")

    def sort_key(self) -> tuple:
        return (self.subject.sort_key(), self.predicate.sort_key(), self.object.sort_key())

    def nodes(self) -> tuple[Node, Node]:
        """Endpoint nodes (the predicate is an edge label, not a node)."""
        return (self.subject, self.object)
