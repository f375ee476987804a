"""The ILSVRC 1,000-class table: loading, validation, and the bridge
between dense model output indices and ImageNet synset ids.

Two on-disk layouts are accepted: a ``index\\tsynset\\tgloss`` TSV and the
widespread index-keyed JSON mapping ``{"0": ["n01440764", "tench"], ...}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from synsetlink.identifiers import ImageNetId, parse_imagenet_id

EXPECTED_CLASS_COUNT = 1_000


class ClassIndexError(ValueError):
    pass


@dataclass(frozen=True)
class ClassEntry:
    index: int
    imagenet: ImageNetId
    gloss: str


class ClassIndex:
    """A validated class table: dense indices 0..999, unique synset ids."""

    def __init__(self, entries: list[ClassEntry]):
        if len(entries) != EXPECTED_CLASS_COUNT:
            raise ClassIndexError(
                f"expected {EXPECTED_CLASS_COUNT} classes, got {len(entries)}"
            )
        entries = sorted(entries, key=lambda entry: entry.index)
        for position, entry in enumerate(entries):
            if entry.index != position:
                raise ClassIndexError(
                    f"class indices must be dense 0..{EXPECTED_CLASS_COUNT - 1}; "
                    f"expected {position}, found {entry.index}"
                )
        seen: dict[ImageNetId, int] = {}
        for entry in entries:
            if entry.imagenet in seen:
                raise ClassIndexError(
                    f"duplicate synset id {entry.imagenet.text} at indices "
                    f"{seen[entry.imagenet]} and {entry.index}"
                )
            seen[entry.imagenet] = entry.index
        self.entries = tuple(entries)
        self._index_of = seen

    def index_to_id(self, index: int) -> ImageNetId:
        if not 0 <= index < EXPECTED_CLASS_COUNT:
            raise ClassIndexError(f"class index out of range: {index}")
        return self.entries[index].imagenet

    def id_to_index(self, imagenet: ImageNetId) -> int:
        try:
            return self._index_of[imagenet]
        except KeyError:
            raise ClassIndexError(f"unknown synset id {imagenet.text}") from None

    def gloss(self, index: int) -> str:
        if not 0 <= index < EXPECTED_CLASS_COUNT:
            raise ClassIndexError(f"class index out of range: {index}")
        return self.entries[index].gloss

    def __contains__(self, imagenet: ImageNetId) -> bool:
        return imagenet in self._index_of

    def __len__(self) -> int:
        return len(self.entries)


def load_class_index(path: str | Path) -> ClassIndex:
    """Load either accepted layout and validate it into a ClassIndex."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return _from_json_mapping(text)
    return _from_tsv(text)


def _from_json_mapping(text: str) -> ClassIndex:
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ClassIndexError(f"class index is not valid JSON: {exc}") from None
    if not isinstance(mapping, dict):
        raise ClassIndexError("class index JSON must be an object")
    entries = []
    for key, value in mapping.items():
        try:
            index = int(key)
        except ValueError:
            raise ClassIndexError(f"non-integer class index key {key!r}") from None
        if not isinstance(value, list) or len(value) != 2:
            raise ClassIndexError(f"entry for index {key} must be [synset, gloss]")
        synset_text, gloss = value
        entries.append(ClassEntry(index, parse_imagenet_id(synset_text), str(gloss)))
    return ClassIndex(entries)


def _from_tsv(text: str) -> ClassIndex:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "index\tsynset\tgloss":
        raise ClassIndexError("expected header 'index\\tsynset\\tgloss'")
    entries = []
    for row, line in enumerate(lines[1:], start=1):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ClassIndexError(f"row {row}: expected 3 fields, got {len(fields)}")
        index_text, synset_text, gloss = fields
        try:
            entries.append(ClassEntry(int(index_text), parse_imagenet_id(synset_text), gloss))
        except ValueError as exc:
            raise ClassIndexError(f"row {row}: {exc}") from None
    return ClassIndex(entries)
