"""Parsing, validation and conversion for the three identifier families:
ImageNet synset IDs (``n07753592``), WordNet LOD URIs
(``http://wordnet-rdf.princeton.edu/wn30/07753592-n``) and Wikidata QIDs
(``Q322787``).

All values are immutable; every operation here is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum

WORDNET_RDF_BASE = "http://wordnet-rdf.princeton.edu/"

_IMAGENET_ID_RE = re.compile(r"^([a-z])([0-9]{8})$")
_QID_RE = re.compile(r"^Q([1-9][0-9]*)$")
_OFFSET_POS_RE = re.compile(r"^([0-9]+)-([a-z])$")


class IdentifierError(ValueError):
    """Base class for every identifier parse/validation failure."""


class MalformedId(IdentifierError):
    pass


class UnknownPos(IdentifierError):
    pass


class ZeroOffset(IdentifierError):
    pass


class MalformedUri(IdentifierError):
    pass


class UnknownSegment(IdentifierError):
    pass


class BadOffsetWidth(IdentifierError):
    pass


class UnsupportedVersion(IdentifierError):
    pass


class PartOfSpeech(Enum):
    NOUN = "n"
    VERB = "v"
    ADJECTIVE = "a"
    ADJECTIVE_SATELLITE = "s"
    ADVERB = "r"

    @property
    def letter(self) -> str:
        return self.value

    @classmethod
    def from_letter(cls, letter: str) -> "PartOfSpeech":
        try:
            return cls(letter)
        except ValueError:
            raise UnknownPos(f"unknown part-of-speech letter {letter!r}") from None


class WnVersion(Enum):
    WN30 = "wn30"
    WN31 = "wn31"


class UriStyle(Enum):
    LEGACY = "legacy"  # wn30 / wn31 path segments
    CANONICAL = "canonical"  # pwn30 / pwn31 (the current princeton prefixes)


# path segment <-> (version, style)
_SEGMENTS = {
    "wn30": (WnVersion.WN30, UriStyle.LEGACY),
    "pwn30": (WnVersion.WN30, UriStyle.CANONICAL),
    "wn31": (WnVersion.WN31, UriStyle.LEGACY),
    "pwn31": (WnVersion.WN31, UriStyle.CANONICAL),
}
_SEGMENT_FOR = {v: k for k, v in _SEGMENTS.items()}


@dataclass(frozen=True)
class SynsetRef:
    """A WordNet synset identity: part of speech, numeric offset, version.

    ``lead`` holds the extra leading digit of 9-digit WordNet 3.1 offsets.
    It is recorded verbatim and never interpreted; 3.0 offsets never have it.
    """

    pos: PartOfSpeech
    offset: int
    version: WnVersion = WnVersion.WN30
    lead: str | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.offset <= 99_999_999:
            raise ZeroOffset(f"synset offset must be in 1..99999999, got {self.offset}")
        if self.lead is not None:
            if self.version is not WnVersion.WN31:
                raise MalformedId("a lead digit is only valid for WordNet 3.1 refs")
            if len(self.lead) != 1 or not self.lead.isdigit():
                raise MalformedId(f"lead must be a single digit, got {self.lead!r}")

    @property
    def offset_text(self) -> str:
        digits = f"{self.offset:08d}"
        return self.lead + digits if self.lead else digits

    @property
    def key(self) -> str:
        """The ``NNNNNNNN-p`` form used in snapshot files and URI paths."""
        return f"{self.offset_text}-{self.pos.letter}"


def parse_synset_key(text: str, version: WnVersion = WnVersion.WN30) -> SynsetRef:
    """Parse the bare ``NNNNNNNN-p`` form (the URI tail / snapshot key)."""
    m = _OFFSET_POS_RE.match(text)
    if m is None:
        raise MalformedId(f"not an offset-pos synset key: {text!r}")
    digits, letter = m.groups()
    pos = PartOfSpeech.from_letter(letter)
    if version is WnVersion.WN30:
        if len(digits) != 8:
            raise BadOffsetWidth(f"wn30 offsets are 8 digits, got {len(digits)} in {text!r}")
        return SynsetRef(pos, _nonzero_offset(digits), version)
    if len(digits) == 8:
        return SynsetRef(pos, _nonzero_offset(digits), version)
    if len(digits) == 9:
        return SynsetRef(pos, _nonzero_offset(digits[1:]), version, lead=digits[0])
    raise BadOffsetWidth(f"wn31 offsets are 8 or 9 digits, got {len(digits)} in {text!r}")


def _nonzero_offset(digits: str) -> int:
    offset = int(digits)
    if offset == 0:
        raise ZeroOffset("synset offset 0 is not a valid WordNet offset")
    return offset


@dataclass(frozen=True)
class ImageNetId:
    """An ImageNet synset identifier: POS letter + 8-digit WordNet 3.0 offset."""

    pos: PartOfSpeech
    offset: int

    def __post_init__(self) -> None:
        if not 1 <= self.offset <= 99_999_999:
            raise ZeroOffset(f"synset offset must be in 1..99999999, got {self.offset}")

    @property
    def text(self) -> str:
        return f"{self.pos.letter}{self.offset:08d}"

    def __str__(self) -> str:
        return self.text


def parse_imagenet_id(text: str) -> ImageNetId:
    """Parse e.g. ``"n07753592"`` into a structured ImageNet ID."""
    m = _IMAGENET_ID_RE.match(text)
    if m is None:
        raise MalformedId(f"not an ImageNet synset id: {text!r}")
    letter, digits = m.groups()
    pos = PartOfSpeech.from_letter(letter)
    return ImageNetId(pos, _nonzero_offset(digits))


@dataclass(frozen=True)
class WordNetUri:
    """A fully qualified wordnet-rdf.princeton.edu synset URI."""

    version: WnVersion
    style: UriStyle
    synset: SynsetRef

    def __post_init__(self) -> None:
        if self.synset.version is not self.version:
            raise MalformedUri(
                f"synset version {self.synset.version.value} does not match "
                f"URI version {self.version.value}"
            )

    @property
    def segment(self) -> str:
        return _SEGMENT_FOR[(self.version, self.style)]

    @property
    def text(self) -> str:
        return f"{WORDNET_RDF_BASE}{self.segment}/{self.synset.key}"

    def __str__(self) -> str:
        return self.text


def parse_wordnet_uri(text: str) -> WordNetUri:
    """Parse any of the four prefix segments (wn30, pwn30, wn31, pwn31).

    wn30 paths require 8-digit offsets; wn31 paths also accept the 9-digit
    form, whose leading digit is kept verbatim.
    """
    if not text.startswith(WORDNET_RDF_BASE):
        raise MalformedUri(f"not a {WORDNET_RDF_BASE} URI: {text!r}")
    path = text[len(WORDNET_RDF_BASE):]
    parts = path.split("/")
    if len(parts) != 2 or not all(parts):
        raise MalformedUri(f"expected <segment>/<offset>-<pos>, got {path!r}")
    segment, tail = parts
    if segment not in _SEGMENTS:
        raise UnknownSegment(f"unknown prefix segment {segment!r}")
    version, style = _SEGMENTS[segment]
    if _OFFSET_POS_RE.match(tail) is None:
        raise MalformedUri(f"bad synset path element {tail!r}")
    return WordNetUri(version, style, parse_synset_key(tail, version))


def normalize_uri(uri: WordNetUri, target_style: UriStyle) -> WordNetUri:
    """Rewrite a URI to the given prefix style; everything else is unchanged."""
    if uri.style is target_style:
        return uri
    return replace(uri, style=target_style)


def imagenet_to_uri(
    imagenet_id: ImageNetId,
    version: WnVersion = WnVersion.WN30,
    style: UriStyle = UriStyle.LEGACY,
) -> WordNetUri:
    """Convert an ImageNet ID to its LOD URI.

    Only WordNet 3.0 is supported: ImageNet labels are 3.0 offsets and
    offsets are not stable across WordNet versions.
    """
    if version is not WnVersion.WN30:
        raise UnsupportedVersion("ImageNet ids are WordNet 3.0 offsets; cannot emit wn31 URIs")
    synset = SynsetRef(imagenet_id.pos, imagenet_id.offset, version)
    return WordNetUri(version, style, synset)


def uri_to_imagenet(uri: WordNetUri) -> ImageNetId:
    """Inverse of :func:`imagenet_to_uri` for WordNet 3.0 URIs."""
    if uri.version is not WnVersion.WN30:
        raise UnsupportedVersion("wn31 offsets do not map to ImageNet (3.0) ids")
    return ImageNetId(uri.synset.pos, uri.synset.offset)


@dataclass(frozen=True, order=True)
class QId:
    """A Wikidata item identifier. Ordering is numeric."""

    number: int

    def __post_init__(self) -> None:
        if self.number < 1:
            raise MalformedId(f"QId numbers start at 1, got {self.number}")

    @property
    def text(self) -> str:
        return f"Q{self.number}"

    def __str__(self) -> str:
        return self.text


def parse_qid(text: str) -> QId:
    """Parse ``"Q322787"``. Leading zeros and Q0 are rejected."""
    m = _QID_RE.match(text)
    if m is None:
        raise MalformedId(f"not a Wikidata item id: {text!r}")
    return QId(int(m.group(1)))
