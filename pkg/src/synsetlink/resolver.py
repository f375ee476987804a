"""Resolution of ImageNet/WordNet identifiers to Wikidata items and labels.

A :class:`Resolver` consults its LRU cache first and falls back to exactly
one backing source: a SPARQL endpoint (live or fixture replay) or an
offline :class:`SnapshotStore`. Empty resolutions are cached too, so an
unlinked synset costs at most one backend lookup per TTL window.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from synsetlink.cache import CacheStats, LruCache
from synsetlink.endpoint import SparqlEndpoint
from synsetlink.identifiers import (
    ImageNetId,
    QId,
    SynsetRef,
    UriStyle,
    WnVersion,
    WordNetUri,
    imagenet_to_uri,
    normalize_uri,
    parse_qid,
    parse_synset_key,
)
from synsetlink.sparql import (
    Literal,
    build_inverse_mapping_query,
    build_label_query,
    is_valid_language_tag,
    qid_from_entity_iri,
)

DEFAULT_CACHE_CAPACITY = 1_024
DEFAULT_FALLBACK_LANGUAGES = ("en",)

MAPPING_FILE = "mapping.tsv"
LABELS_FILE = "labels.tsv"
_MAPPING_HEADER = "synset\tqid"
_LABELS_HEADER = "qid\tlang\tlabel"

_MISS = object()


class SnapshotError(ValueError):
    """A malformed snapshot file; carries the offending data row number."""

    def __init__(self, filename: str, row: int, detail: str):
        self.filename = filename
        self.row = row
        super().__init__(f"{filename}, row {row}: {detail}")


@dataclass(frozen=True)
class LabelRecord:
    qid: QId
    language: str
    label: str

    def __post_init__(self) -> None:
        if not is_valid_language_tag(self.language):
            raise ValueError(f"not a lowercase language tag: {self.language!r}")
        if not self.label:
            raise ValueError("label must be non-empty")
        if "\t" in self.label or "\n" in self.label:
            raise ValueError("labels must not contain tabs or newlines")


@dataclass(frozen=True)
class Resolution:
    synset: SynsetRef
    qids: tuple[QId, ...]  # ascending numeric; empty for unlinked synsets
    source: str  # cache | endpoint | snapshot


@dataclass(frozen=True)
class ResolvedLabel:
    """Outcome of resolve-then-label: smallest QId wins, ``multiplicity``
    flags synsets claimed by more than one item."""

    synset: SynsetRef
    qid: QId | None
    label: str | None
    language: str | None
    source: str
    multiplicity: bool

    @property
    def cache_hit(self) -> bool:
        return self.source == "cache"


class SnapshotStore:
    """Offline TSV store: ``mapping.tsv`` (synset -> qid, wn30 key form)
    and ``labels.tsv`` (qid, lang, label). UTF-8, LF, literal header row."""

    def __init__(self) -> None:
        self._mapping: dict[str, list[QId]] = {}
        self._labels: dict[tuple[str, str], str] = {}

    def add_mapping(self, synset: SynsetRef, qid: QId) -> None:
        qids = self._mapping.setdefault(synset.key, [])
        if qid not in qids:
            qids.append(qid)
            qids.sort()

    def add_label(self, record: LabelRecord) -> None:
        key = (record.qid.text, record.language)
        existing = self._labels.get(key)
        if existing is not None and existing != record.label:
            raise ValueError(f"conflicting label for {key}: {existing!r} vs {record.label!r}")
        self._labels[key] = record.label

    def lookup_qids(self, synset: SynsetRef) -> tuple[QId, ...]:
        return tuple(self._mapping.get(synset.key, ()))

    def lookup_label(self, qid: QId, language: str) -> str | None:
        return self._labels.get((qid.text, language))

    def __len__(self) -> int:
        return len(self._mapping) + len(self._labels)

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        mapping_lines = [_MAPPING_HEADER]
        for key in sorted(self._mapping):
            for qid in self._mapping[key]:
                mapping_lines.append(f"{key}\t{qid.text}")
        (directory / MAPPING_FILE).write_text(
            "\n".join(mapping_lines) + "\n", encoding="utf-8", newline="\n"
        )
        label_lines = [_LABELS_HEADER]
        for (qid_text, lang) in sorted(
            self._labels, key=lambda k: (parse_qid(k[0]).number, k[1])
        ):
            label_lines.append(f"{qid_text}\t{lang}\t{self._labels[(qid_text, lang)]}")
        (directory / LABELS_FILE).write_text(
            "\n".join(label_lines) + "\n", encoding="utf-8", newline="\n"
        )

    @classmethod
    def load(cls, directory: str | Path) -> "SnapshotStore":
        directory = Path(directory)
        store = cls()
        for row, fields in _read_tsv(directory / MAPPING_FILE, _MAPPING_HEADER, 2):
            key_text, qid_text = fields
            try:
                synset = parse_synset_key(key_text)
                qid = parse_qid(qid_text)
            except ValueError as exc:
                raise SnapshotError(MAPPING_FILE, row, str(exc)) from None
            store.add_mapping(synset, qid)
        labels_path = directory / LABELS_FILE
        if labels_path.exists():
            for row, fields in _read_tsv(labels_path, _LABELS_HEADER, 3):
                qid_text, lang, label = fields
                try:
                    record = LabelRecord(parse_qid(qid_text), lang, label)
                except ValueError as exc:
                    raise SnapshotError(LABELS_FILE, row, str(exc)) from None
                try:
                    store.add_label(record)
                except ValueError as exc:
                    raise SnapshotError(LABELS_FILE, row, str(exc)) from None
        return store


def _read_tsv(path: Path, header: str, width: int) -> Iterable[tuple[int, list[str]]]:
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != header:
        raise SnapshotError(path.name, 0, f"expected header {header!r}")
    for row, line in enumerate(lines[1:], start=1):
        fields = line.split("\t")
        if len(fields) != width:
            raise SnapshotError(
                path.name, row, f"expected {width} tab-separated fields, got {len(fields)}"
            )
        yield row, fields


class Resolver:
    """Cached synset-to-item and item-to-label resolution.

    Exactly one of ``endpoint`` / ``snapshot`` must be given. Shareable
    across threads; a cache miss causes at most one in-flight backend
    request per key.
    """

    def __init__(
        self,
        endpoint: SparqlEndpoint | None = None,
        snapshot: SnapshotStore | None = None,
        cache_capacity: int = DEFAULT_CACHE_CAPACITY,
        ttl: float = 0.0,
        clock: Callable[[], float] | None = None,
        default_fallback: tuple[str, ...] = DEFAULT_FALLBACK_LANGUAGES,
    ):
        if (endpoint is None) == (snapshot is None):
            raise ValueError("provide exactly one of endpoint or snapshot")
        self._endpoint = endpoint
        self._snapshot = snapshot
        self._source = "endpoint" if endpoint is not None else "snapshot"
        self._cache = LruCache(cache_capacity, ttl=ttl, clock=clock)
        self._default_fallback = tuple(default_fallback)
        self._meta_lock = threading.Lock()
        self._key_locks: dict[object, threading.Lock] = {}

    def _lock_for(self, key: object) -> threading.Lock:
        with self._meta_lock:
            lock = self._key_locks.get(key)
            if lock is None:
                lock = self._key_locks[key] = threading.Lock()
            return lock

    @staticmethod
    def canonical_uri(target: ImageNetId | WordNetUri) -> WordNetUri:
        """The wn30 legacy-style URI used as the resolution cache key."""
        if isinstance(target, ImageNetId):
            return imagenet_to_uri(target)
        if target.version is not WnVersion.WN30:
            from synsetlink.identifiers import UnsupportedVersion

            raise UnsupportedVersion("only WordNet 3.0 synsets are resolvable")
        return normalize_uri(target, UriStyle.LEGACY)

    def resolve_synset(self, target: ImageNetId | WordNetUri) -> Resolution:
        uri = self.canonical_uri(target)
        key = uri.text
        with self._lock_for(key):
            cached = self._cache.get(key, _MISS)
            if cached is not _MISS:
                return Resolution(uri.synset, cached, "cache")
            qids = self._fetch_qids(uri)
            self._cache.put(key, qids)
            return Resolution(uri.synset, qids, self._source)

    def _fetch_qids(self, uri: WordNetUri) -> tuple[QId, ...]:
        if self._snapshot is not None:
            return self._snapshot.lookup_qids(uri.synset)
        rows = self._endpoint.execute(build_inverse_mapping_query(uri))
        qids = sorted({qid_from_entity_iri(row.iri("item")) for row in rows})
        return tuple(qids)

    def get_label(
        self, qid: QId, language: str, fallback: tuple[str, ...] | list[str] = ()
    ) -> LabelRecord | None:
        """First available label along ``[language] + fallback``.

        Each consulted (qid, tag) pair lands in the cache, including
        negative entries for tags with no label.
        """
        chain = _language_chain(language, fallback)
        with self._lock_for(("label", qid.text)):
            fetched = False
            for tag in chain:
                value = self._cache.get((qid.text, tag), _MISS)
                if value is _MISS:
                    if not fetched:
                        self._fetch_labels(qid, chain)
                        fetched = True
                    value = self._cache.get((qid.text, tag))
                if value is not None:
                    return LabelRecord(qid, tag, value)
            return None

    def _fetch_labels(self, qid: QId, chain: tuple[str, ...]) -> None:
        if self._snapshot is not None:
            found = {
                tag: label
                for tag in chain
                if (label := self._snapshot.lookup_label(qid, tag)) is not None
            }
        else:
            rows = self._endpoint.execute(build_label_query(qid, chain))
            found = {}
            for row in rows:
                lang = row.literal("lang").value
                label = row.literal("label")
                found.setdefault(lang, label.value)
        for tag in chain:
            self._cache.put((qid.text, tag), found.get(tag))

    def resolve_and_label(
        self,
        target: ImageNetId | WordNetUri,
        language: str,
        fallback: tuple[str, ...] | list[str] | None = None,
    ) -> ResolvedLabel:
        """Resolve the synset, then label its smallest QId."""
        if fallback is None:
            fallback = self._default_fallback
        resolution = self.resolve_synset(target)
        if not resolution.qids:
            return ResolvedLabel(resolution.synset, None, None, None, resolution.source, False)
        qid = resolution.qids[0]
        multiplicity = len(resolution.qids) > 1
        record = self.get_label(qid, language, fallback)
        if record is None:
            return ResolvedLabel(
                resolution.synset, qid, None, None, resolution.source, multiplicity
            )
        return ResolvedLabel(
            resolution.synset, qid, record.label, record.language,
            resolution.source, multiplicity,
        )

    def cache_stats(self) -> CacheStats:
        return self._cache.stats()


def _language_chain(language: str, fallback: tuple[str, ...] | list[str]) -> tuple[str, ...]:
    chain: list[str] = []
    for tag in (language, *fallback):
        if not is_valid_language_tag(tag):
            raise ValueError(f"not a lowercase language tag: {tag!r}")
        if tag not in chain:
            chain.append(tag)
    return tuple(chain)
