"""Line-oriented N-Triples reader and writer.

Covers the W3C N-Triples grammar without named graphs: IRIs in angle
brackets with \\uXXXX / \\UXXXXXXXX escapes, ``_:`` blank node labels, and
quoted literals with string escapes plus an optional ``@lang`` tag or
``^^<datatype>``. Comment lines and trailing comments after the final dot
are skipped. Everything else on a line is a syntax error: strict mode
aborts with the line number, lenient mode counts the line as skipped.
"""
from __future__ import annotations

import io
import json
import re
import time
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import ParseError
from .graph import RdfGraph
from .model import BLANK, IRI, LITERAL, Node, Triple, blank, iri

_BLANK_LABEL = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.\-]*")
_LANG_TAG = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")
# Characters that may never appear raw inside an IRIREF.
_IRI_FORBIDDEN = set('<>"{}|^`\\') | {chr(c) for c in range(0x21)}

_STRING_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}


@dataclass
class ParseReport:
    """Outcome counters for one parse run."""

    triples: int
    skipped_lines: int
    duration_ms: float

    def to_json_dict(self) -> dict:
        return {
            "triples": self.triples,
            "skippedLines": self.skipped_lines,
            "durationMs": round(self.duration_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


class _LineScanner:
    """Cursor over one statement line."""

    def __init__(self, line: str, lineno: int):
        self.line = line
        self.pos = 0
        self.lineno = lineno

    def fail(self, message: str):
        raise ParseError(f"line {self.lineno}: {message}", self.lineno)

    def skip_ws(self):
        while self.pos < len(self.line) and self.line[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.line[self.pos] if self.pos < len(self.line) else ""

    def _unicode_escape(self) -> str:
        # self.pos sits on the backslash
        tag = self.line[self.pos + 1: self.pos + 2]
        width = 4 if tag == "u" else 8 if tag == "U" else 0
        if not width:
            self.fail(f"invalid escape \\{tag}")
        digits = self.line[self.pos + 2: self.pos + 2 + width]
        if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
            self.fail(f"invalid \\{tag} escape")
        self.pos += 2 + width
        code = int(digits, 16)
        if code > 0x10FFFF:
            self.fail("escape beyond U+10FFFF")
        return chr(code)

    def read_iri(self) -> Node:
        self.pos += 1  # consume '<'
        out = []
        while True:
            if self.pos >= len(self.line):
                self.fail("unterminated IRI")
            c = self.line[self.pos]
            if c == ">":
                self.pos += 1
                break
            if c == "\\":
                out.append(self._unicode_escape())
                continue
            if c in _IRI_FORBIDDEN or c == " ":
                self.fail(f"character {c!r} not allowed in IRI")
            out.append(c)
            self.pos += 1
        text = "".join(out)
        if not text:
            self.fail("empty IRI")
        try:
            return iri(text)
        except ValueError as exc:
            self.fail(str(exc))

    def read_blank(self) -> Node:
        if self.line[self.pos: self.pos + 2] != "_:":
            self.fail("expected blank node label")
        m = _BLANK_LABEL.match(self.line, self.pos + 2)
        if not m:
            self.fail("invalid blank node label")
        label = m.group(0).rstrip(".")
        if not label:
            self.fail("invalid blank node label")
        self.pos = self.pos + 2 + len(label)
        return blank(label)

    def read_literal(self) -> Node:
        self.pos += 1  # consume opening quote
        out = []
        while True:
            if self.pos >= len(self.line):
                self.fail("unterminated string literal")
            c = self.line[self.pos]
            if c == '"':
                self.pos += 1
                break
            if c in "\n\r":
                self.fail("raw line break in string literal")
            if c == "\\":
                tag = self.line[self.pos + 1: self.pos + 2]
                if tag in _STRING_ESCAPES:
                    out.append(_STRING_ESCAPES[tag])
                    self.pos += 2
                    continue
                out.append(self._unicode_escape())
                continue
            out.append(c)
            self.pos += 1
        text = "".join(out)
        if self.peek() == "@":
            m = _LANG_TAG.match(self.line, self.pos + 1)
            if not m:
                self.fail("invalid language tag")
            self.pos = self.pos + 1 + len(m.group(0))
            return Node(LITERAL, text, lang=m.group(0))
        if self.line[self.pos: self.pos + 2] == "^^":
            self.pos += 2
            if self.peek() != "<":
                self.fail("datatype must be an IRI")
            dt = self.read_iri()
            return Node(LITERAL, text, datatype=dt.lexical)
        return Node(LITERAL, text)

    def read_term(self, position: str) -> Node:
        self.skip_ws()
        c = self.peek()
        if c == "<":
            return self.read_iri()
        if c == "_":
            node = self.read_blank()
            if position == "predicate":
                self.fail("predicate must be an IRI")
            return node
        if c == '"':
            if position != "object":
                self.fail(f"{position} cannot be a literal")
            return self.read_literal()
        self.fail(f"expected {position} term, found {c!r}" if c else f"missing {position} term")

    def read_statement(self) -> Triple:
        s = self.read_term("subject")
        p = self.read_term("predicate")
        o = self.read_term("object")
        self.skip_ws()
        if self.peek() != ".":
            self.fail("expected '.' after object")
        self.pos += 1
        self.skip_ws()
        rest = self.line[self.pos:]
        if rest and not rest.startswith("#"):
            self.fail(f"unexpected trailing text: {rest[:20]!r}")
        return Triple(s, p, o)


def _iter_lines(source: str | bytes | IO) -> Iterable[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.BufferedIOBase) or (hasattr(source, "mode") and "b" in getattr(source, "mode", "")):
        return io.TextIOWrapper(source, encoding="utf-8")
    return source


def parse_ntriples(source: str | bytes | IO, mode: str = "strict") -> tuple[RdfGraph, ParseReport]:
    """Parse N-Triples text into a deduplicated, insertion-ordered graph.

    ``mode='strict'`` raises :class:`ParseError` on the first malformed
    line; ``mode='lenient'`` skips malformed lines and counts them in the
    returned report.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown parse mode: {mode!r}")
    start = time.perf_counter()
    triples: list[Triple] = []
    seen: set[Triple] = set()
    skipped = 0
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            t = _LineScanner(line, lineno).read_statement()
        except ParseError:
            if mode == "strict":
                raise
            skipped += 1
            continue
        if t not in seen:
            seen.add(t)
            triples.append(t)
    graph = RdfGraph(triples)
    duration = (time.perf_counter() - start) * 1000.0
    return graph, ParseReport(len(graph), skipped, duration)


def parse_ntriples_file(path, mode: str = "strict") -> tuple[RdfGraph, ParseReport]:
    with open(path, "rb") as fh:
        return parse_ntriples(fh, mode=mode)


def _escape_string(text: str) -> str:
    out = []
    for c in text:
        if c == "\\":
            out.append("\\\\")
        elif c == '"':
            out.append('\\"')
        elif c == "\n":
            out.append("\\n")
        elif c == "\r":
            out.append("\\r")
        elif c == "\t":
            out.append("\\t")
        elif c == "\b":
            out.append("\\b")
        elif c == "\f":
            out.append("\\f")
        elif ord(c) < 0x20:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)


def _escape_iri(text: str) -> str:
    out = []
    for c in text:
        if c in _IRI_FORBIDDEN or c == " ":
            code = ord(c)
            out.append(f"\\u{code:04X}" if code <= 0xFFFF else f"\\U{code:08X}")
        else:
            out.append(c)
    return "".join(out)


def term_to_text(node: Node) -> str:
    """Serialize one term in N-Triples syntax."""
    if node.kind == IRI:
        return f"<{_escape_iri(node.lexical)}>"
    if node.kind == BLANK:
        return f"_:{node.lexical}"
    base = f'"{_escape_string(node.lexical)}"'
    if node.lang:
        return f"{base}@{node.lang}"
    if node.datatype:
        return f"{base}^^<{_escape_iri(node.datatype)}>"
    return base


def triple_to_line(t: Triple) -> str:
    return f"{term_to_text(t.subject)} {term_to_text(t.predicate)} {term_to_text(t.object)} ."


def serialize(graph: RdfGraph) -> str:
    """Write the graph back out, one statement per line, insertion order."""
    return "".join(triple_to_line(t) + "\n" for t in graph.triples)
