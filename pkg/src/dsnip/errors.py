"""Exception types shared across the package.

Each error carries enough context for the CLI to name the failing stage
and map it to a stable exit code.
"""
from __future__ import annotations


class DsnipError(Exception):
    """Base class for all errors raised by this package."""

    stage = "internal"

    def __init__(self, message: str = "", stage: str | None = None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage


class ParseError(DsnipError):
    """Malformed N-Triples input (strict mode aborts on the first one)."""

    stage = "parse"

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class AnnotationLoadError(DsnipError):
    """Malformed annotation TSV (unknown label, missing column, duplicate id)."""

    stage = "annotations"

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class EmptyQueryError(DsnipError):
    """Query has no keywords left after stop-word removal."""

    stage = "query"


class TooManyKeywordsError(DsnipError):
    """Keyword count exceeds the configured solver cap."""

    stage = "query"


class UnmatchedKeywordsError(DsnipError):
    """Some keywords match no graph node and dropping them was not allowed."""

    stage = "mapping"

    def __init__(self, keywords):
        self.keywords = tuple(keywords)
        super().__init__(
            "keywords matched no node: " + ", ".join(self.keywords)
        )


class NoConnectedCoverError(DsnipError):
    """No connected subgraph touches every keyword group."""

    stage = "gst"

    def __init__(self, keywords):
        self.keywords = tuple(keywords)
        super().__init__(
            "no connected cover; separated keywords: " + ", ".join(self.keywords)
        )


class EnumerationLimitError(DsnipError):
    """A brute-force oracle refused an instance above its size guard."""

    stage = "oracle"
