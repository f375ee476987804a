"""SPARQL query construction and result parsing for the WDQS linkage queries.

Queries are built as fixed templates; two query texts are considered equal
when they match after whitespace canonicalization (runs of whitespace
collapse to a single space, ends trimmed). The golden copies live under
``fixtures/queries/*.rq``.

Results follow the SPARQL 1.1 Query Results JSON Format.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum

from synsetlink.identifiers import MalformedUri, QId, WordNetUri, parse_qid

WN30_PREFIX = "http://wordnet-rdf.princeton.edu/wn30/"
WN31_PREFIX = "http://wordnet-rdf.princeton.edu/wn31/"
WIKIDATA_ENTITY_PREFIX = "http://www.wikidata.org/entity/"
DIRECT_PROPERTY_PREFIX = "http://www.wikidata.org/prop/direct/"

# Wikimedia disambiguation page class, used by the audit checks.
DISAMBIGUATION_CLASS = "Q4167410"

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1

_LANG_TAG_RE = re.compile(r"^[a-z][a-z0-9]*(-[a-z0-9]+)*$")

_XSD_INTEGER_TYPES = frozenset(
    "http://www.w3.org/2001/XMLSchema#" + name
    for name in (
        "integer", "long", "int", "short", "byte",
        "nonNegativeInteger", "nonPositiveInteger",
        "negativeInteger", "positiveInteger",
        "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte",
    )
)


class SparqlError(ValueError):
    pass


class MalformedResults(SparqlError):
    pass


class ShapeMismatch(SparqlError):
    pass


class QueryShape(Enum):
    SINGLE_COUNT = "single_count"
    ITEM_ROWS = "item_rows"
    ITEM_COUNT_ROWS = "item_count_rows"
    COUNT_FREQUENCY_ROWS = "count_frequency_rows"
    LABEL_ROWS = "label_rows"


REQUIRED_VARS: dict[QueryShape, frozenset[str]] = {
    QueryShape.SINGLE_COUNT: frozenset({"count"}),
    QueryShape.ITEM_ROWS: frozenset({"item"}),
    QueryShape.ITEM_COUNT_ROWS: frozenset({"item", "count"}),
    QueryShape.COUNT_FREQUENCY_ROWS: frozenset({"count", "frequency"}),
    QueryShape.LABEL_ROWS: frozenset({"lang", "label"}),
}


@dataclass(frozen=True)
class SparqlQuery:
    text: str
    shape: QueryShape

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise SparqlError("query text must be non-empty")


def canonicalize_query(text: str) -> str:
    """Collapse whitespace runs to single spaces and trim. Idempotent."""
    return re.sub(r"\s+", " ", text).strip()


def query_hash(text: str) -> str:
    """Content hash of the canonicalized query, used as the fixture key."""
    return hashlib.sha256(canonicalize_query(text).encode("utf-8")).hexdigest()


def _guard_uri_text(uri: str) -> str:
    """Reject URI strings that could escape an IRI ref or a quoted filter."""
    if not uri or re.search(r'[<>"\s]', uri):
        raise MalformedUri(f"unsafe URI text for query substitution: {uri!r}")
    return uri


_INVERSE_MAPPING = 'SELECT * WHERE {{ ?item wdt:P2888 <{uri}> }}'

_COUNT_LINKED = """\
SELECT
  (COUNT(*) AS ?count)
WHERE {{
  ?item wdt:P2888 ?uri .
  FILTER STRSTARTS(STR(?uri),
    "{prefix}")
}}"""

_STATEMENT_COUNTS = """\
SELECT
  ?item
  (COUNT(?property) AS ?count)
WHERE {{
  ?item wdt:P2888 ?uri .
  FILTER STRSTARTS(STR(?uri),
    "{prefix}")
  ?item ?property [] .
  FILTER STRSTARTS(STR(?property),
    "{direct}")
}}
GROUP BY ?item
ORDER BY ?count"""

_HISTOGRAM = """\
SELECT
  ?count (COUNT(?item) AS ?frequency)
WHERE {{
  SELECT
    ?item
    (COUNT(?property) AS ?count)
  WHERE {{
    ?item wdt:P2888 ?uri .
    FILTER STRSTARTS(STR(?uri),
      "{prefix}")
    ?item ?property [] .
    FILTER STRSTARTS(STR(?property),
      "{direct}")
  }}
  GROUP BY ?item
}}
GROUP BY ?count"""

_BABELNET_COUNT = "SELECT (COUNT(*) AS ?count) WHERE {{ [] wdt:P2581 [] }}"

_COOCCURRENCE = """\
SELECT
  (COUNT(DISTINCT ?item) AS ?count)
WHERE {{
  ?item wdt:P2888 ?uri .
  FILTER STRSTARTS(STR(?uri),
    "{prefix}")
  ?item wdt:P2581 [] .
}}"""

_LABEL = """\
SELECT ?lang ?label
WHERE {{
  wd:{qid} rdfs:label ?label .
  BIND (LANG(?label) AS ?lang)
  FILTER (?lang IN ({languages}))
}}"""

_DISAMBIGUATION = """\
SELECT
  (COUNT(*) AS ?count)
WHERE {{
  wd:{qid} wdt:P31 wd:{cls} .
}}"""


def build_inverse_mapping_query(uri: WordNetUri) -> SparqlQuery:
    """The WordNet-URI-to-item lookup: ``SELECT * WHERE {?item wdt:P2888 <uri>}``."""
    text = _INVERSE_MAPPING.format(uri=_guard_uri_text(uri.text))
    return SparqlQuery(text, QueryShape.ITEM_ROWS)


def build_count_linked_query(prefix: str = WN30_PREFIX) -> SparqlQuery:
    """Count P2888 statements whose URI starts with the given prefix."""
    text = _COUNT_LINKED.format(prefix=_guard_uri_text(prefix))
    return SparqlQuery(text, QueryShape.SINGLE_COUNT)


def build_statement_counts_query(prefix: str = WN30_PREFIX) -> SparqlQuery:
    """Per-item direct-statement counts for items linked under the prefix."""
    text = _STATEMENT_COUNTS.format(
        prefix=_guard_uri_text(prefix), direct=DIRECT_PROPERTY_PREFIX
    )
    return SparqlQuery(text, QueryShape.ITEM_COUNT_ROWS)


def build_histogram_query(prefix: str = WN30_PREFIX) -> SparqlQuery:
    """Frequency of each statement count over the linked items (nested select)."""
    text = _HISTOGRAM.format(prefix=_guard_uri_text(prefix), direct=DIRECT_PROPERTY_PREFIX)
    return SparqlQuery(text, QueryShape.COUNT_FREQUENCY_ROWS)


def build_babelnet_count_query() -> SparqlQuery:
    """Total number of BabelNet (P2581) identifier statements."""
    return SparqlQuery(_BABELNET_COUNT.format(), QueryShape.SINGLE_COUNT)


def build_cooccurrence_query(prefix: str = WN30_PREFIX) -> SparqlQuery:
    """Items carrying both a prefix-matching P2888 link and any P2581 link."""
    text = _COOCCURRENCE.format(prefix=_guard_uri_text(prefix))
    return SparqlQuery(text, QueryShape.SINGLE_COUNT)


def build_label_query(qid: QId, languages: list[str] | tuple[str, ...]) -> SparqlQuery:
    """Fetch the item's label terms restricted to the given language tags."""
    if not languages:
        raise SparqlError("at least one language tag is required")
    for tag in languages:
        if _LANG_TAG_RE.match(tag) is None:
            raise SparqlError(f"not a lowercase language tag: {tag!r}")
    rendered = ", ".join(f'"{tag}"' for tag in languages)
    text = _LABEL.format(qid=qid.text, languages=rendered)
    return SparqlQuery(text, QueryShape.LABEL_ROWS)


def build_disambiguation_query(qid: QId) -> SparqlQuery:
    """Count instance-of statements pointing at the disambiguation-page class."""
    text = _DISAMBIGUATION.format(qid=qid.text, cls=DISAMBIGUATION_CLASS)
    return SparqlQuery(text, QueryShape.SINGLE_COUNT)


def is_valid_language_tag(tag: str) -> bool:
    return _LANG_TAG_RE.match(tag) is not None


@dataclass(frozen=True)
class Iri:
    value: str


@dataclass(frozen=True)
class Literal:
    value: str
    lang: str | None = None


@dataclass(frozen=True)
class ResultRow:
    """One solution: variable name -> Iri | Literal | int."""

    bindings: dict[str, object] = field(default_factory=dict)

    def __getitem__(self, name: str) -> object:
        return self.bindings[name]

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def integer(self, name: str) -> int:
        value = self.bindings[name]
        if not isinstance(value, int):
            raise MalformedResults(f"variable {name!r} is not an integer: {value!r}")
        return value

    def iri(self, name: str) -> str:
        value = self.bindings[name]
        if not isinstance(value, Iri):
            raise MalformedResults(f"variable {name!r} is not an IRI: {value!r}")
        return value.value

    def literal(self, name: str) -> Literal:
        value = self.bindings[name]
        if isinstance(value, Literal):
            return value
        raise MalformedResults(f"variable {name!r} is not a literal: {value!r}")


def _parse_binding(var: str, entry: object) -> object:
    if not isinstance(entry, dict) or "type" not in entry or "value" not in entry:
        raise MalformedResults(f"malformed binding for {var!r}: {entry!r}")
    kind = entry["type"]
    value = entry["value"]
    if not isinstance(value, str):
        raise MalformedResults(f"binding value for {var!r} is not a string")
    if kind == "uri":
        return Iri(value)
    if kind == "bnode":
        return Iri("_:" + value)
    if kind in ("literal", "typed-literal"):
        datatype = entry.get("datatype")
        if datatype in _XSD_INTEGER_TYPES:
            try:
                number = int(value)
            except ValueError:
                raise MalformedResults(f"bad integer literal {value!r} for {var!r}") from None
            if not _INT64_MIN <= number <= _INT64_MAX:
                raise MalformedResults(f"integer literal out of 64-bit range: {value}")
            return number
        return Literal(value, entry.get("xml:lang"))
    raise MalformedResults(f"unknown binding type {kind!r} for {var!r}")


def parse_results(body: bytes | str, shape: QueryShape) -> list[ResultRow]:
    """Parse a SPARQL JSON results document into typed rows for the shape.

    Every row must bind all of the shape's required variables; a missing
    binding raises :class:`ShapeMismatch`. No row is ever dropped.
    """
    if isinstance(body, bytes):
        try:
            body = body.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedResults(f"results are not UTF-8: {exc}") from None
    try:
        document = json.loads(body)
    except json.JSONDecodeError as exc:
        raise MalformedResults(f"results are not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise MalformedResults("results document is not a JSON object")
    results = document.get("results")
    if not isinstance(results, dict) or not isinstance(results.get("bindings"), list):
        raise MalformedResults("missing results.bindings array")
    required = REQUIRED_VARS[shape]
    rows: list[ResultRow] = []
    for raw in results["bindings"]:
        if not isinstance(raw, dict):
            raise MalformedResults(f"binding set is not an object: {raw!r}")
        bindings = {var: _parse_binding(var, entry) for var, entry in raw.items()}
        missing = required - bindings.keys()
        if missing:
            raise ShapeMismatch(
                f"row is missing required variable(s) {sorted(missing)} "
                f"for shape {shape.value}"
            )
        rows.append(ResultRow(bindings))
    return rows


def qid_from_entity_iri(iri: str) -> QId:
    """Extract the QId from ``http://www.wikidata.org/entity/Q144``."""
    if not iri.startswith(WIKIDATA_ENTITY_PREFIX):
        raise MalformedResults(f"not a Wikidata entity IRI: {iri!r}")
    return parse_qid(iri[len(WIKIDATA_ENTITY_PREFIX):])
