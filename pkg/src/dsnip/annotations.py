"""The 12-label query annotation scheme and corpus distribution statistics.

Seven labels describe metadata mentions and five describe data-content
mentions. Annotated corpora arrive as TSV files; the statistics mirror
the scheme's published distribution columns: per-label percentages,
metadata/content union percentages, and query length figures.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass

from .errors import AnnotationLoadError, DsnipError

METADATA_LABELS = ("Name", "DomainTopic", "DataFormat", "Language",
                   "Accessibility", "Provenance", "Statistics")
CONTENT_LABELS = ("Concept", "Geospatial", "OtherEntities", "Temporal",
                  "OtherNumbers")
ALL_LABELS = METADATA_LABELS + CONTENT_LABELS
QUERY_TYPES = ("phrase", "keyword", "sentence")

_REQUIRED_COLUMNS = ("queryId", "queryText", "labels")
_OPTIONAL_COLUMN = "queryType"


@dataclass(frozen=True, slots=True)
class AnnotationRecord:
    """One annotated query: id, text, labels, and an optional query type."""

    query_id: str
    query_text: str
    labels: frozenset[str]
    query_type: str | None = None

    def __post_init__(self):
        bad = self.labels - set(ALL_LABELS)
        if bad:
            raise AnnotationLoadError(f"unknown label {sorted(bad)[0]!r}")
        if self.query_type is not None and self.query_type not in QUERY_TYPES:
            raise AnnotationLoadError(f"unknown query type {self.query_type!r}")

    @property
    def word_count(self) -> int:
        return len(self.query_text.split())


def load_annotations(source: str | os.PathLike | io.TextIOBase) -> list[AnnotationRecord]:
    """Load an annotation TSV: header `queryId\\tqueryText\\tlabels[\\tqueryType]`.

    `#` comment lines and blank lines are ignored; labels are
    semicolon-separated. Unknown labels, missing columns, and duplicate
    query ids raise AnnotationLoadError naming the offending row.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()

    header: list[str] | None = None
    records: list[AnnotationRecord] = []
    seen_ids: dict[str, int] = {}
    for row, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split("\t")
        if header is None:
            header = [c.strip() for c in cells]
            if tuple(header[:3]) != _REQUIRED_COLUMNS or len(header) > 4 or (
                    len(header) == 4 and header[3] != _OPTIONAL_COLUMN):
                raise AnnotationLoadError(
                    f"bad header at row {row}: expected "
                    f"queryId\\tqueryText\\tlabels[\\tqueryType]", row=row)
            continue
        if len(cells) < 3 or len(cells) > len(header):
            raise AnnotationLoadError(
                f"expected {len(header)} columns at row {row}, got {len(cells)}",
                row=row)
        query_id = cells[0].strip()
        if not query_id:
            raise AnnotationLoadError(f"empty queryId at row {row}", row=row)
        if query_id in seen_ids:
            raise AnnotationLoadError(
                f"duplicate queryId {query_id!r} at row {row} "
                f"(first at row {seen_ids[query_id]})", row=row)
        seen_ids[query_id] = row
        labels = frozenset(p.strip() for p in cells[2].split(";") if p.strip())
        bad = labels - set(ALL_LABELS)
        if bad:
            raise AnnotationLoadError(
                f"unknown label {sorted(bad)[0]!r} at row {row}", row=row)
        query_type = None
        if len(cells) == 4 and cells[3].strip():
            query_type = cells[3].strip()
            if query_type not in QUERY_TYPES:
                raise AnnotationLoadError(
                    f"unknown query type {query_type!r} at row {row}", row=row)
        records.append(AnnotationRecord(query_id=query_id,
                                        query_text=cells[1],
                                        labels=labels,
                                        query_type=query_type))
    if header is None:
        raise AnnotationLoadError("missing header row", row=0)
    return records


@dataclass(frozen=True)
class CorpusStats:
    """Distribution statistics over an annotated query corpus."""

    per_label_percent: dict[str, float]
    metadata_overall_percent: float
    content_overall_percent: float
    both_percent: float
    mean_words: float
    percent_within_5_to_11_words: float
    type_distribution: dict[str, float] | None = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "perLabelPercent": {k: round(v, 2)
                                for k, v in self.per_label_percent.items()},
            "metadataOverallPercent": round(self.metadata_overall_percent, 2),
            "contentOverallPercent": round(self.content_overall_percent, 2),
            "bothPercent": round(self.both_percent, 2),
            "meanWords": round(self.mean_words, 2),
            "percentWithin5to11Words": round(self.percent_within_5_to_11_words, 2),
        }
        if self.type_distribution is not None:
            out["typeDistribution"] = {k: round(v, 2)
                                       for k, v in self.type_distribution.items()}
        return out


def category_distribution(records: list[AnnotationRecord]) -> CorpusStats:
    """Compute per-label and union percentages plus query length statistics.

    The type distribution is computed over records that carry a query
    type, and omitted when none does.
    """
    if not records:
        raise DsnipError("at least one annotation record is required",
                         stage="annotations")
    n = len(records)
    metadata = set(METADATA_LABELS)
    content = set(CONTENT_LABELS)
    per_label = {label: 100.0 * sum(1 for r in records if label in r.labels) / n
                 for label in ALL_LABELS}
    meta_n = sum(1 for r in records if r.labels & metadata)
    cont_n = sum(1 for r in records if r.labels & content)
    both_n = sum(1 for r in records if r.labels & metadata and r.labels & content)
    words = [r.word_count for r in records]
    in_range = sum(1 for w in words if 5 <= w <= 11)

    typed = [r for r in records if r.query_type is not None]
    type_dist = None
    if typed:
        type_dist = {t: 100.0 * sum(1 for r in typed if r.query_type == t) / len(typed)
                     for t in QUERY_TYPES}
    return CorpusStats(
        per_label_percent=per_label,
        metadata_overall_percent=100.0 * meta_n / n,
        content_overall_percent=100.0 * cont_n / n,
        both_percent=100.0 * both_n / n,
        mean_words=sum(words) / n,
        percent_within_5_to_11_words=100.0 * in_range / n,
        type_distribution=type_dist,
    )
