import pytest

from synsetlink.audit import (
    AuditReport,
    MatchRecord,
    MatchStatus,
    MatchTableError,
    audit_report,
    check_disambiguation,
    flag_suspect_matches,
    load_match_table,
    save_match_table,
)
from synsetlink.endpoint import FixtureEndpoint
from synsetlink.identifiers import parse_imagenet_id, parse_qid, parse_wordnet_uri


@pytest.fixture(scope="module")
def endpoint(request):
    return FixtureEndpoint(request.config.rootpath / "fixtures")


@pytest.fixture(scope="module")
def table1(request):
    return load_match_table(request.config.rootpath / "fixtures" / "audit" / "table1.tsv")


@pytest.fixture(scope="module")
def suspects(request):
    return load_match_table(request.config.rootpath / "fixtures" / "audit" / "suspects.tsv")


def test_table1_loads_seven_records(table1):
    assert len(table1) == 7


def test_table1_sunglass_row(table1):
    by_id = {record.imagenet.text: record for record in table1}
    sunglass = by_id["n04355933"]
    assert sunglass.status is MatchStatus.IMAGENET_WORDNET_DISCREPANCY
    assert sunglass.qid == parse_qid("Q368027")
    assert "burning glass" in sunglass.note


def test_table1_bathroom_cabinet_row(table1):
    by_id = {record.imagenet.text: record for record in table1}
    cabinet = by_id["n03742115"]
    assert cabinet.status is MatchStatus.MATCHED
    assert cabinet.qid == parse_qid("Q4869069")


def test_table1_screen_row_has_two_candidates(table1):
    by_id = {record.imagenet.text: record for record in table1}
    screen = by_id["n04152593"]
    assert screen.status is MatchStatus.MULTIPLE_CANDIDATES
    assert set(screen.candidates) == {parse_qid("Q5290"), parse_qid("Q1736293")}


def test_matched_without_qid_rejected():
    with pytest.raises(ValueError):
        MatchRecord(
            parse_imagenet_id("n03742115"),
            parse_wordnet_uri("http://wordnet-rdf.princeton.edu/wn30/03742115-n"),
            None,
            (),
            MatchStatus.MATCHED,
        )


def test_missing_with_qid_rejected():
    with pytest.raises(ValueError):
        MatchRecord(
            parse_imagenet_id("n03742115"),
            parse_wordnet_uri("http://wordnet-rdf.princeton.edu/wn30/03742115-n"),
            parse_qid("Q1"),
            (),
            MatchStatus.MISSING_FROM_WIKIDATA,
        )


def test_load_rejects_invariant_violations(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "imagenet\twordnet\tqid\tcandidates\tstatus\tnote\n"
        "n03742115\thttp://wordnet-rdf.princeton.edu/wn30/03742115-n\t\t\tmatched\tx\n"
    )
    with pytest.raises(MatchTableError) as excinfo:
        load_match_table(path)
    assert excinfo.value.row == 1


def test_load_reports_malformed_row_number(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "imagenet\twordnet\tqid\tcandidates\tstatus\tnote\n"
        "n03742115\thttp://wordnet-rdf.princeton.edu/wn30/03742115-n\tQ4869069\t\tmatched\tok\n"
        "banana\tnot-a-uri\t\t\tmatched\t\n"
    )
    with pytest.raises(MatchTableError) as excinfo:
        load_match_table(path)
    assert excinfo.value.row == 2


def test_save_load_round_trip(table1, tmp_path):
    path = tmp_path / "copy.tsv"
    save_match_table(table1, path)
    assert load_match_table(path) == table1


def test_report_counts_partition_the_set(table1):
    report = audit_report(table1)
    assert report.total == len(table1)
    assert sum(report.counts.values()) == 7
    assert report.counts[MatchStatus.IMAGENET_WORDNET_DISCREPANCY] == 5
    assert report.counts[MatchStatus.MATCHED] == 1
    assert report.counts[MatchStatus.MULTIPLE_CANDIDATES] == 1


def test_report_counts_equal_brute_force_tally(table1):
    report = audit_report(table1)
    for status in MatchStatus:
        assert report.counts[status] == sum(1 for r in table1 if r.status is status)


def test_report_listings_sorted_by_imagenet_id(table1):
    report = audit_report(table1)
    for records in report.listings.values():
        ids = [record.imagenet.text for record in records]
        assert ids == sorted(ids)


def test_empty_table_report():
    report = audit_report([])
    assert report.total == 0
    assert all(count == 0 for count in report.counts.values())


def test_report_renderings(table1):
    report = audit_report(table1)
    text = report.render_text()
    assert "imagenet_wordnet_discrepancy: 5" in text
    assert "total: 7" in text
    tsv = report.render_tsv()
    assert tsv.startswith("status\tcount\n")
    assert "matched\t1" in tsv
    assert len(tsv.rstrip("\n").split("\n")) == 1 + len(MatchStatus)


def test_check_disambiguation(endpoint):
    assert check_disambiguation(endpoint, parse_qid("Q90000050")) is True
    assert check_disambiguation(endpoint, parse_qid("Q322787")) is False
    assert check_disambiguation(endpoint, parse_qid("Q25503439")) is False


def test_flag_suspects_finds_seeded_problems(suspects, endpoint):
    flags = flag_suspect_matches(suspects, endpoint)
    flagged = {(record.imagenet.text, reason) for record, reason in flags}
    assert flagged == {
        ("n03775546", "disambiguation"),
        ("n04099969", "divergent"),
    }


def test_flag_suspects_clean_table(table1, endpoint):
    assert flag_suspect_matches(table1, endpoint) == []


def test_flag_never_flags_consistent_records(suspects, endpoint):
    consistent = [record for record in suspects if record.imagenet.text == "n04033901"]
    assert flag_suspect_matches(consistent, endpoint) == []


def test_report_is_an_audit_report(table1):
    assert isinstance(audit_report(table1), AuditReport)
