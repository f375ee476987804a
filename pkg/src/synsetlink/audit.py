"""Alignment-audit reporting over a curated ImageNet/WordNet/Wikidata
match table.

Each record carries a single status from the matching-problem taxonomy;
overlapping difficulties go in the free-text note. Two endpoint-backed
checks flag suspect rows: items that are disambiguation pages, and matched
rows whose synset now resolves to a different item.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from synsetlink.endpoint import SparqlEndpoint
from synsetlink.identifiers import (
    ImageNetId,
    QId,
    WordNetUri,
    parse_imagenet_id,
    parse_qid,
    parse_wordnet_uri,
)
from synsetlink.resolver import Resolver
from synsetlink.sparql import build_disambiguation_query

MATCH_TABLE_HEADER = "imagenet\twordnet\tqid\tcandidates\tstatus\tnote"


class MatchTableError(ValueError):
    """A malformed or invariant-violating match-table row."""

    def __init__(self, row: int, detail: str):
        self.row = row
        super().__init__(f"match table row {row}: {detail}")


class MatchStatus(Enum):
    MATCHED = "matched"
    MISSING_FROM_WIKIDATA = "missing_from_wikidata"
    DISAMBIGUATION_PAGE = "disambiguation_page"
    IMAGENET_WORDNET_DISCREPANCY = "imagenet_wordnet_discrepancy"
    CONCEPT_MISMATCH = "concept_mismatch"
    MULTIPLE_CANDIDATES = "multiple_candidates"
    UNREVIEWED = "unreviewed"


@dataclass(frozen=True)
class MatchRecord:
    imagenet: ImageNetId
    wordnet: WordNetUri
    qid: QId | None
    candidates: tuple[QId, ...]
    status: MatchStatus
    note: str = ""

    def __post_init__(self) -> None:
        if self.status is MatchStatus.MATCHED and self.qid is None:
            raise ValueError("a matched record needs a qid")
        if self.status is MatchStatus.MISSING_FROM_WIKIDATA and self.qid is not None:
            raise ValueError("a missing_from_wikidata record cannot carry a qid")
        if self.status is MatchStatus.MULTIPLE_CANDIDATES and len(self.candidates) < 2:
            raise ValueError("multiple_candidates needs at least two candidates")
        if "\t" in self.note or "\n" in self.note:
            raise ValueError("notes must not contain tabs or newlines")


def load_match_table(path: str | Path) -> list[MatchRecord]:
    """Load and validate a match-table TSV; failures name the data row."""
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MATCH_TABLE_HEADER:
        raise MatchTableError(0, f"expected header {MATCH_TABLE_HEADER!r}")
    records = []
    for row, line in enumerate(lines[1:], start=1):
        fields = line.split("\t")
        if len(fields) != 6:
            raise MatchTableError(row, f"expected 6 fields, got {len(fields)}")
        imagenet_text, wordnet_text, qid_text, candidates_text, status_text, note = fields
        try:
            imagenet = parse_imagenet_id(imagenet_text)
            wordnet = parse_wordnet_uri(wordnet_text)
            qid = parse_qid(qid_text) if qid_text else None
            candidates = tuple(
                parse_qid(part) for part in candidates_text.split(",") if part
            )
            status = MatchStatus(status_text)
        except ValueError as exc:
            raise MatchTableError(row, str(exc)) from None
        try:
            records.append(MatchRecord(imagenet, wordnet, qid, candidates, status, note))
        except ValueError as exc:
            raise MatchTableError(row, str(exc)) from None
    return records


def save_match_table(records: list[MatchRecord], path: str | Path) -> None:
    lines = [MATCH_TABLE_HEADER]
    for record in records:
        lines.append(
            "\t".join(
                (
                    record.imagenet.text,
                    record.wordnet.text,
                    record.qid.text if record.qid else "",
                    ",".join(candidate.text for candidate in record.candidates),
                    record.status.value,
                    record.note,
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


@dataclass(frozen=True)
class AuditReport:
    counts: dict[MatchStatus, int]
    listings: dict[MatchStatus, list[MatchRecord]]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def render_text(self) -> str:
        lines = []
        for status in MatchStatus:
            lines.append(f"{status.value}: {self.counts[status]}")
            for record in self.listings[status]:
                qid = record.qid.text if record.qid else "-"
                lines.append(f"  {record.imagenet.text}  {qid}  {record.note}")
        lines.append(f"total: {self.total}")
        return "\n".join(lines)

    def render_tsv(self) -> str:
        lines = ["status\tcount"]
        lines.extend(f"{status.value}\t{self.counts[status]}" for status in MatchStatus)
        return "\n".join(lines) + "\n"


def audit_report(records: list[MatchRecord]) -> AuditReport:
    """Group records by status; counts partition the record set."""
    counts = {status: 0 for status in MatchStatus}
    listings: dict[MatchStatus, list[MatchRecord]] = {status: [] for status in MatchStatus}
    for record in records:
        counts[record.status] += 1
        listings[record.status].append(record)
    for group in listings.values():
        group.sort(key=lambda record: record.imagenet.text)
    return AuditReport(counts, listings)


def check_disambiguation(endpoint: SparqlEndpoint, qid: QId) -> bool:
    """True iff the item is an instance of the disambiguation-page class."""
    rows = endpoint.execute(build_disambiguation_query(qid))
    return bool(rows) and rows[0].integer("count") > 0


def flag_suspect_matches(
    records: list[MatchRecord], endpoint: SparqlEndpoint
) -> list[tuple[MatchRecord, str]]:
    """Flag records pointing at disambiguation items, and matched records
    whose synset currently resolves to a different item."""
    resolver = Resolver(endpoint=endpoint)
    flags = []
    for record in records:
        if record.qid is None:
            continue
        if check_disambiguation(endpoint, record.qid):
            flags.append((record, "disambiguation"))
        if record.status is MatchStatus.MATCHED:
            resolution = resolver.resolve_synset(record.wordnet)
            if resolution.qids and record.qid not in resolution.qids:
                flags.append((record, "divergent"))
    return flags
