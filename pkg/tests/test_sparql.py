import pytest

from synsetlink.identifiers import MalformedUri, QId, parse_wordnet_uri
from synsetlink.sparql import (
    Iri,
    Literal,
    MalformedResults,
    QueryShape,
    ShapeMismatch,
    SparqlError,
    WN30_PREFIX,
    WN31_PREFIX,
    build_babelnet_count_query,
    build_cooccurrence_query,
    build_count_linked_query,
    build_disambiguation_query,
    build_histogram_query,
    build_inverse_mapping_query,
    build_label_query,
    build_statement_counts_query,
    canonicalize_query,
    parse_results,
    qid_from_entity_iri,
    query_hash,
)
from tests.conftest import sparql_json

QUILL_URI = "http://wordnet-rdf.princeton.edu/wn30/04033901-n"


def same_query(a: str, b: str) -> bool:
    return canonicalize_query(a) == canonicalize_query(b)


def test_inverse_mapping_query_text():
    query = build_inverse_mapping_query(parse_wordnet_uri(QUILL_URI))
    assert query.text == f"SELECT * WHERE {{ ?item wdt:P2888 <{QUILL_URI}> }}"
    assert query.shape is QueryShape.ITEM_ROWS


def test_inverse_mapping_substitutes_any_uri():
    uri = parse_wordnet_uri("http://wordnet-rdf.princeton.edu/wn30/07711569-n")
    query = build_inverse_mapping_query(uri)
    assert query.text == f"SELECT * WHERE {{ ?item wdt:P2888 <{uri.text}> }}"


def test_inverse_mapping_keeps_canonical_style():
    uri = parse_wordnet_uri("http://wordnet-rdf.princeton.edu/pwn30/04033901-n")
    assert "<http://wordnet-rdf.princeton.edu/pwn30/04033901-n>" in build_inverse_mapping_query(uri).text


@pytest.mark.parametrize(
    "name, build",
    [
        ("count_linked", build_count_linked_query),
        ("statement_counts", build_statement_counts_query),
        ("histogram", build_histogram_query),
        ("cooccurrence", build_cooccurrence_query),
    ],
)
def test_prefix_builders_match_goldens(golden_queries, name, build):
    assert same_query(build().text, golden_queries[name])


def test_inverse_mapping_matches_golden(golden_queries):
    query = build_inverse_mapping_query(parse_wordnet_uri(QUILL_URI))
    assert same_query(query.text, golden_queries["inverse_mapping"])


def test_babelnet_count_matches_golden(golden_queries):
    assert same_query(build_babelnet_count_query().text, golden_queries["babelnet_count"])


def test_label_query_matches_golden(golden_queries):
    query = build_label_query(QId(322787), ["en"])
    assert same_query(query.text, golden_queries["label"])


def test_disambiguation_query_matches_golden(golden_queries):
    assert same_query(build_disambiguation_query(QId(322787)).text, golden_queries["disambiguation"])


def test_count_linked_accepts_other_prefixes():
    query = build_count_linked_query(WN31_PREFIX)
    assert WN31_PREFIX in query.text
    assert WN30_PREFIX not in query.text


def test_query_shapes():
    assert build_count_linked_query().shape is QueryShape.SINGLE_COUNT
    assert build_statement_counts_query().shape is QueryShape.ITEM_COUNT_ROWS
    assert build_histogram_query().shape is QueryShape.COUNT_FREQUENCY_ROWS
    assert build_babelnet_count_query().shape is QueryShape.SINGLE_COUNT
    assert build_cooccurrence_query().shape is QueryShape.SINGLE_COUNT
    assert build_label_query(QId(3962), ["en"]).shape is QueryShape.LABEL_ROWS


def test_canonicalization_idempotent():
    text = build_histogram_query().text
    once = canonicalize_query(text)
    assert canonicalize_query(once) == once
    assert "\n" not in once


def test_whitespace_variants_share_a_hash():
    text = build_count_linked_query().text
    reflowed = text.replace("\n", "  \n\t ")
    assert query_hash(text) == query_hash(reflowed)


def test_unsafe_prefix_rejected():
    for bad in ("http://x/> . ?s ?p ?o", 'http://x/"', "http://x/ ", ""):
        with pytest.raises(MalformedUri):
            build_count_linked_query(bad)


def test_label_query_requires_languages():
    with pytest.raises(SparqlError):
        build_label_query(QId(1), [])
    with pytest.raises(SparqlError):
        build_label_query(QId(1), ['en"'])


def test_parse_single_count():
    rows = parse_results(sparql_json([{"count": 324}]), QueryShape.SINGLE_COUNT)
    assert len(rows) == 1
    assert rows[0].integer("count") == 324


def test_parse_empty_results():
    assert parse_results(sparql_json([]), QueryShape.ITEM_ROWS) == []


def test_parse_item_count_row():
    body = sparql_json([{"item": "http://www.wikidata.org/entity/Q144", "count": 112}])
    rows = parse_results(body, QueryShape.ITEM_COUNT_ROWS)
    assert qid_from_entity_iri(rows[0].iri("item")) == QId(144)
    assert rows[0].integer("count") == 112


def test_parse_label_rows_with_language_tags():
    body = sparql_json([{"lang": "da", "label": ("kaffekrus", "da")}])
    rows = parse_results(body, QueryShape.LABEL_ROWS)
    assert rows[0].literal("label") == Literal("kaffekrus", "da")
    assert rows[0].literal("lang").value == "da"


def test_missing_required_variable_is_shape_mismatch():
    body = sparql_json([{"count": 9}])
    with pytest.raises(ShapeMismatch):
        parse_results(body, QueryShape.COUNT_FREQUENCY_ROWS)


def test_row_count_preserved():
    body = sparql_json([{"item": f"http://www.wikidata.org/entity/Q{n}"} for n in range(1, 51)])
    assert len(parse_results(body, QueryShape.ITEM_ROWS)) == 50


def test_malformed_documents_rejected():
    for bad in (b"", b"[]", b"{\"results\": 3}", b"{}", b"\xff\xfe"):
        with pytest.raises(MalformedResults):
            parse_results(bad, QueryShape.ITEM_ROWS)


def test_integer_overflow_is_an_error():
    body = sparql_json([{"count": 2**63}])
    with pytest.raises(MalformedResults):
        parse_results(body, QueryShape.SINGLE_COUNT)


def test_non_integer_typed_count_stays_literal():
    rows = parse_results(sparql_json([{"count": "notanumber"}]), QueryShape.SINGLE_COUNT)
    with pytest.raises(MalformedResults):
        rows[0].integer("count")


def test_entity_iri_parsing():
    assert qid_from_entity_iri("http://www.wikidata.org/entity/Q4063215") == QId(4063215)
    with pytest.raises(MalformedResults):
        qid_from_entity_iri("http://example.org/Q1")


def test_iri_binding_type():
    body = sparql_json([{"item": "http://www.wikidata.org/entity/Q144"}])
    row = parse_results(body, QueryShape.ITEM_ROWS)[0]
    assert row["item"] == Iri("http://www.wikidata.org/entity/Q144")
