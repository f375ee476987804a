"""Linkage statistics over a SPARQL endpoint: linked-synset count,
per-item statement counts, the statement-count histogram, BabelNet usage
and co-occurrence, and low-statement listings.

The reference numbers are pinned in the bundled fixture store; live
endpoint values drift and are informational only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from synsetlink.endpoint import SparqlEndpoint
from synsetlink.identifiers import QId
from synsetlink.sparql import (
    MalformedResults,
    WN30_PREFIX,
    build_babelnet_count_query,
    build_cooccurrence_query,
    build_count_linked_query,
    build_histogram_query,
    build_statement_counts_query,
    qid_from_entity_iri,
)


@dataclass(frozen=True)
class ItemStatementCount:
    qid: QId
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("a linked item carries at least its linking statement")


@dataclass(frozen=True)
class StatementHistogram:
    """Frequency of per-item statement counts."""

    bins: dict[int, int]
    total_items: int

    def __post_init__(self) -> None:
        if any(count < 0 or frequency < 0 for count, frequency in self.bins.items()):
            raise ValueError("histogram bins must be non-negative")
        if sum(self.bins.values()) != self.total_items:
            raise ValueError("bin frequencies must sum to total_items")

    @property
    def mode(self) -> int:
        """The statement count with the highest frequency (smallest on ties)."""
        if not self.bins:
            raise ValueError("empty histogram has no mode")
        return min(self.bins, key=lambda count: (-self.bins[count], count))


def _single_count(rows) -> int:
    if len(rows) != 1:
        raise MalformedResults(f"expected exactly one count row, got {len(rows)}")
    return rows[0].integer("count")


def count_linked(endpoint: SparqlEndpoint, prefix: str = WN30_PREFIX) -> int:
    """Number of P2888 statements pointing under the WordNet prefix."""
    return _single_count(endpoint.execute(build_count_linked_query(prefix)))


def statement_counts(
    endpoint: SparqlEndpoint, prefix: str = WN30_PREFIX
) -> list[ItemStatementCount]:
    """Per-item direct-statement counts, ascending by count."""
    rows = endpoint.execute(build_statement_counts_query(prefix))
    counts = [
        ItemStatementCount(qid_from_entity_iri(row.iri("item")), row.integer("count"))
        for row in rows
    ]
    counts.sort(key=lambda item: (item.count, item.qid))
    return counts


def histogram(endpoint: SparqlEndpoint, prefix: str = WN30_PREFIX) -> StatementHistogram:
    rows = endpoint.execute(build_histogram_query(prefix))
    bins: dict[int, int] = {}
    for row in rows:
        count = row.integer("count")
        if count in bins:
            raise MalformedResults(f"duplicate histogram bin for count {count}")
        bins[count] = row.integer("frequency")
    return StatementHistogram(bins, sum(bins.values()))


def babelnet_usage(endpoint: SparqlEndpoint) -> int:
    """Total number of BabelNet identifier (P2581) statements."""
    return _single_count(endpoint.execute(build_babelnet_count_query()))


def cooccurrence(endpoint: SparqlEndpoint, prefix: str = WN30_PREFIX) -> int:
    """Items linked to both the WordNet prefix (P2888) and BabelNet (P2581)."""
    return _single_count(endpoint.execute(build_cooccurrence_query(prefix)))


def low_statement_items(
    counts: list[ItemStatementCount], threshold: int
) -> list[QId]:
    """QIds of items with at most ``threshold`` statements, ascending."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return sorted(item.qid for item in counts if item.count <= threshold)


def emit_histogram_csv(h: StatementHistogram, path: str | Path) -> None:
    """Write plot-ready ``count,frequency`` rows, ascending by count."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["count", "frequency"])
        for count in sorted(h.bins):
            writer.writerow([count, h.bins[count]])


def parse_histogram_csv(path: str | Path) -> StatementHistogram:
    """Inverse of :func:`emit_histogram_csv`."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["count", "frequency"]:
            raise ValueError(f"expected count,frequency header, got {header}")
        bins = {int(count): int(frequency) for count, frequency in reader}
    return StatementHistogram(bins, sum(bins.values()))
