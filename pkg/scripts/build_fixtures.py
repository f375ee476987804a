#!/usr/bin/env python3
"""Regenerate the bundled fixture store under fixtures/.

The store is a synthetic snapshot of the linkage graph that pins the
reference statistics (324 linked synsets, histogram mode 9, 59,105
BabelNet statements, 105 co-linked items) plus the named example items.
Every recorded SPARQL response is derived from the item/label tables this
script writes, so tests can cross-check responses against a brute-force
scan of the same tables.

fixtures/imagenet_class_index.json is an input, not an output: it is the
ILSVRC-2012 class list with indices in ascending-wnid order.

Usage: PYTHONPATH=src python3 scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "src"))

from synsetlink.identifiers import QId, parse_imagenet_id, parse_qid, parse_wordnet_uri
from synsetlink.ilsvrc import load_class_index
from synsetlink.sparql import (
    WN30_PREFIX,
    build_babelnet_count_query,
    build_cooccurrence_query,
    build_count_linked_query,
    build_disambiguation_query,
    build_histogram_query,
    build_inverse_mapping_query,
    build_label_query,
    build_statement_counts_query,
    query_hash,
)

FIXTURES = REPO_ROOT / "fixtures"

TOTAL_LINKED = 324
BABELNET_TOTAL = 59_105
COOCCURRENCE_TOTAL = 105

# statement-count distribution over the 324 linked items; mode must be 9
BIN_DISTRIBUTION = {
    1: 6, 2: 18, 3: 21, 4: 23, 5: 26, 6: 28, 7: 30, 8: 33, 9: 38,
    10: 26, 11: 22, 12: 14, 13: 10, 14: 7, 15: 5, 16: 4, 18: 3,
    20: 2, 25: 2, 30: 1, 40: 1, 55: 1, 101: 1, 108: 1, 112: 1,
}

# (qid, wnid or bare wn30 offset key, statements, babelnet?, labels)
# QIds below 90,000,000 are real Wikidata identifiers; the 9xxxxxxx range
# is reserved for synthetic rows.
PINNED_ITEMS = [
    ("Q144", "02084071-n", 112, True, {"en": "dog", "da": "hund"}),
    ("Q90000201", "n01614925", 108, True, {"en": "bald eagle"}),
    ("Q90000202", "n01443537", 101, True, {"en": "goldfish"}),
    ("Q503", "n07753592", 40, True, {"en": "banana", "da": "banan"}),
    ("Q124441", "n04554684", 14, False, {"en": "washing machine", "da": "vaskemaskine"}),
    ("Q4063215", "n04033901", 11, True, {"en": "quill", "da": "fjerpen"}),
    ("Q322787", "n07711569", 7, False, {"en": "mashed potato", "da": "kartoffelmos"}),
    ("Q90000021", "n03063599", 6, False, {"en": "coffee mug", "da": "kaffekrus"}),
    ("Q1890958", "n03868863", 5, False, {"en": "oxygen mask"}),
    ("Q90000041", "n04099969", 5, False, {"en": "rocking chair"}),
    ("Q90000031", "n04370456", 4, False, {"en": "sweatshirt"}),
    ("Q90000032", "n04370456", 4, False, {"en": "sweat shirt"}),
    ("Q4869069", "n03742115", 3, False, {"en": "bathroom cabinet"}),
    ("Q90000101", "n03125729", 3, False, {"en": "cradle"}),
    ("Q1736293", "n04152593", 3, False, {"en": "cathode-ray tube screen"}),
    ("Q4165197", "n03692522", 2, False, {"en": "loupe"}),
    ("Q90000102", "n03937543", 2, False, {"en": "pill bottle"}),
    ("Q90000103", "n02808304", 2, False, {"en": "bath towel"}),
    ("Q90000108", "n04263257", 2, False, {"en": "soup bowl"}),
    ("Q90000050", "n03775546", 2, False, {"en": "mixing bowl"}),
    ("Q90000104", "n03337140", 9, False, {"en": "filing cabinet"}),
    ("Q90000105", "n02107312", 9, False, {"en": "Miniature Pinscher"}),
    ("Q90000106", "n04380533", 9, False, {"en": "table lamp"}),
    ("Q90000107", "n03124170", 9, False, {"en": "cowboy hat"}),
]

# labels for items that exist but are not P2888-linked in the snapshot
EXTRA_LABELS = {
    "Q3962": {"en": "laptop"},
}

DISAMBIGUATION_ITEMS = {"Q90000050"}

# synsets recorded with an explicitly empty inverse mapping (unlinked)
UNLINKED_WNIDS = ["n07930864", "n07565083", "n03832673", "n04355933", "n03944341"]

# items checked by the audit flags although they are not snapshot rows
EXTRA_DISAMBIGUATION_CHECKS = ["Q3962", "Q25503439", "Q90000040", "Q368027"]

AUDIT_TABLE1 = [
    ("n07930864", "", "Q1121224", "imagenet_wordnet_discrepancy",
     "ImageNet shows coffee cups; the WordNet sense is a punch serving and Q1121224 covers the parent punch concept"),
    ("n07565083", "", "Q658274", "imagenet_wordnet_discrepancy",
     "printed menu cards vs the dishes-of-a-meal sense; no item for the WordNet sense"),
    ("n03742115", "Q4869069", "", "matched", "bathroom cabinet"),
    ("n03832673", "", "Q3962", "imagenet_wordnet_discrepancy",
     "notebook computer vs the paper planner hyponym; Q3962 (laptop) is the closest item"),
    ("n04152593", "", "Q5290,Q1736293", "multiple_candidates",
     "computer monitor vs CRT-only screen; ImageNet mixes CRTs and flat panels"),
    ("n04355933", "Q368027", "", "imagenet_wordnet_discrepancy",
     "burning glass vs protective eyewear"),
    ("n03944341", "", "", "imagenet_wordnet_discrepancy",
     "wheel with pins vs toy (n03944138); the English Wikipedia page is a disambiguation page"),
]

AUDIT_SUSPECTS = [
    ("n03775546", "Q90000050", "", "matched", "mixing bowl; the item describes a disambiguation page"),
    ("n04099969", "Q90000040", "", "matched", "rocking chair; the P2888 link has since moved to a new item"),
    ("n04033901", "Q4063215", "", "matched", "quill"),
]

LABEL_CHAINS = (("en",), ("da",), ("da", "en"))


def wn30_uri(key: str) -> str:
    return WN30_PREFIX + key


def wnid_to_key(wnid: str) -> str:
    if wnid.startswith("n") and len(wnid) == 9:
        return wnid[1:] + "-n"
    return wnid  # already a bare offset key


def integer_binding(value: int) -> dict:
    return {
        "type": "literal",
        "datatype": "http://www.w3.org/2001/XMLSchema#integer",
        "value": str(value),
    }


def entity_binding(qid: str) -> dict:
    return {"type": "uri", "value": f"http://www.wikidata.org/entity/{qid}"}


def label_binding(text: str, lang: str) -> dict:
    return {"type": "literal", "xml:lang": lang, "value": text}


def results_document(variables: list[str], bindings: list[dict]) -> str:
    return json.dumps(
        {"head": {"vars": variables}, "results": {"bindings": bindings}}, indent=1
    )


def build_item_table(class_index) -> list[tuple[str, str, bool, int]]:
    """Rows of (qid, synset key, babelnet?, statements), 324 in total."""
    remaining = dict(BIN_DISTRIBUTION)
    used_keys = set()
    rows = []
    for qid, wnid, statements, babelnet, _labels in PINNED_ITEMS:
        key = wnid_to_key(wnid)
        used_keys.add(key)
        if remaining[statements] <= 0:
            raise SystemExit(f"bin {statements} overdrawn by pinned items")
        remaining[statements] -= 1
        rows.append((qid, key, babelnet, statements))

    reserved = used_keys | {wnid_to_key(w) for w in UNLINKED_WNIDS}
    free_wnids = [
        entry.imagenet.text
        for entry in class_index.entries
        if wnid_to_key(entry.imagenet.text) not in reserved
    ]
    synthetic_counts = [
        count for count in sorted(remaining) for _ in range(remaining[count])
    ]
    if len(synthetic_counts) > len(free_wnids):
        raise SystemExit("not enough free ILSVRC synsets for the synthetic rows")

    babelnet_needed = COOCCURRENCE_TOTAL - sum(1 for row in rows if row[2])
    next_qid = 90_001_000
    for position, count in enumerate(synthetic_counts):
        rows.append(
            (
                f"Q{next_qid + 7 * position}",
                wnid_to_key(free_wnids[position]),
                position < babelnet_needed,
                count,
            )
        )
    if len(rows) != TOTAL_LINKED:
        raise SystemExit(f"expected {TOTAL_LINKED} rows, built {len(rows)}")
    if sum(1 for row in rows if row[2]) != COOCCURRENCE_TOTAL:
        raise SystemExit("babelnet flag count does not match the co-occurrence total")
    return rows


def write_source_tables(rows, labels: dict[str, dict[str, str]]) -> None:
    lines = ["qid\turi\tbabelnet\tstatements"]
    for qid, key, babelnet, statements in rows:
        lines.append(f"{qid}\t{wn30_uri(key)}\t{int(babelnet)}\t{statements}")
    (FIXTURES / "wikidata_items.tsv").write_text("\n".join(lines) + "\n")

    label_lines = ["qid\tlang\tlabel"]
    for qid in sorted(labels, key=lambda q: int(q[1:])):
        for lang in sorted(labels[qid]):
            label_lines.append(f"{qid}\t{lang}\t{labels[qid][lang]}")
    (FIXTURES / "wikidata_labels.tsv").write_text("\n".join(label_lines) + "\n")

    disambiguation_lines = ["qid"] + sorted(DISAMBIGUATION_ITEMS)
    (FIXTURES / "wikidata_disambiguation.tsv").write_text(
        "\n".join(disambiguation_lines) + "\n"
    )


def record(responses: dict[str, str], query_text: str, body: str) -> None:
    digest = query_hash(query_text)
    if digest in responses and responses[digest] != body:
        raise SystemExit(f"hash collision for {query_text[:60]!r}")
    responses[digest] = body


def build_responses(rows, labels, class_index) -> dict[str, str]:
    responses: dict[str, str] = {}

    record(
        responses,
        build_count_linked_query().text,
        results_document(["count"], [{"count": integer_binding(len(rows))}]),
    )

    ordered = sorted(rows, key=lambda row: (row[3], int(row[0][1:])))
    record(
        responses,
        build_statement_counts_query().text,
        results_document(
            ["item", "count"],
            [
                {"item": entity_binding(qid), "count": integer_binding(statements)}
                for qid, _key, _babelnet, statements in ordered
            ],
        ),
    )

    bins = Counter(statements for _qid, _key, _babelnet, statements in rows)
    record(
        responses,
        build_histogram_query().text,
        results_document(
            ["count", "frequency"],
            [
                {"count": integer_binding(count), "frequency": integer_binding(bins[count])}
                for count in sorted(bins)
            ],
        ),
    )

    record(
        responses,
        build_babelnet_count_query().text,
        results_document(["count"], [{"count": integer_binding(BABELNET_TOTAL)}]),
    )

    cooccurring = sum(1 for row in rows if row[2])
    record(
        responses,
        build_cooccurrence_query().text,
        results_document(["count"], [{"count": integer_binding(cooccurring)}]),
    )

    # closed world over the snapshot: every linked synset answers with its
    # claimants, every other ILSVRC class synset answers empty, so only
    # synsets outside the snapshot produce fixture misses
    by_key: dict[str, list[str]] = {}
    for qid, key, _babelnet, _statements in rows:
        by_key.setdefault(key, []).append(qid)
    class_keys = {wnid_to_key(entry.imagenet.text) for entry in class_index.entries}
    for key in sorted(by_key.keys() | class_keys):
        uri = parse_wordnet_uri(wn30_uri(key))
        # response order is deliberately not sorted: descending qid
        claimants = sorted(by_key.get(key, ()), key=lambda q: -int(q[1:]))
        record(
            responses,
            build_inverse_mapping_query(uri).text,
            results_document(["item"], [{"item": entity_binding(q)} for q in claimants]),
        )

    # every snapshot item answers label queries for the recorded chains
    # (empty bindings where it has no label in that language)
    label_qids = sorted(
        set(labels) | {qid for qid, _key, _bn, _st in rows}, key=lambda q: int(q[1:])
    )
    for qid_text in label_qids:
        qid = parse_qid(qid_text)
        for chain in LABEL_CHAINS:
            bindings = []
            for lang in chain:
                text = labels.get(qid_text, {}).get(lang)
                if text is not None:
                    bindings.append(
                        {
                            "lang": {"type": "literal", "value": lang},
                            "label": label_binding(text, lang),
                        }
                    )
            record(
                responses,
                build_label_query(qid, list(chain)).text,
                results_document(["lang", "label"], bindings),
            )
    # the missing-language example: quill has no xx label
    record(
        responses,
        build_label_query(parse_qid("Q4063215"), ["xx"]).text,
        results_document(["lang", "label"], []),
    )

    checked = sorted(
        {qid for qid, _key, _bn, _st in rows}
        | set(EXTRA_DISAMBIGUATION_CHECKS)
        | set(EXTRA_LABELS),
        key=lambda q: int(q[1:]),
    )
    for qid_text in checked:
        record(
            responses,
            build_disambiguation_query(parse_qid(qid_text)).text,
            results_document(
                ["count"],
                [{"count": integer_binding(1 if qid_text in DISAMBIGUATION_ITEMS else 0)}],
            ),
        )
    return responses


def write_audit_tables() -> None:
    audit_dir = FIXTURES / "audit"
    audit_dir.mkdir(parents=True, exist_ok=True)
    header = "imagenet\twordnet\tqid\tcandidates\tstatus\tnote"
    for filename, table in (("table1.tsv", AUDIT_TABLE1), ("suspects.tsv", AUDIT_SUSPECTS)):
        lines = [header]
        for wnid, qid, candidates, status, note in table:
            uri = wn30_uri(wnid_to_key(wnid))
            lines.append(f"{wnid}\t{uri}\t{qid}\t{candidates}\t{status}\t{note}")
        (audit_dir / filename).write_text("\n".join(lines) + "\n")


README = """\
# Fixture store

A deterministic snapshot used by the tests and by fixture-mode CLI runs.
Regenerate with `PYTHONPATH=src python3 scripts/build_fixtures.py`; the
output is stable.

- `imagenet_class_index.json` - the ILSVRC-2012 classification class list
  (1,000 classes) with indices in ascending-wnid order, the convention
  used by the common pre-trained-model decoders. This file is an input to
  the generator, not an output.
- `wikidata_items.tsv` - the synthetic linkage graph: one row per linked
  item (qid, WordNet 3.0 URI, BabelNet flag, direct-statement count). It
  pins the reference totals: 324 linked statements, 105 items co-linked
  to BabelNet, statement-count mode 9. QIds of items named in the
  reference examples are real Wikidata ids; the Q9xxxxxxx range is
  reserved for synthetic rows and does not refer to live items.
- `wikidata_labels.tsv`, `wikidata_disambiguation.tsv` - label terms and
  the disambiguation-page markers backing the label and audit responses.
- `queries/*.rq` - golden query texts; builders must reproduce them up to
  whitespace.
- `responses/<sha256>.json` - recorded SPARQL JSON responses keyed by the
  canonicalized query's content hash. All derived from the tables above,
  except the global BabelNet total (59,105), which has no per-item
  breakdown here. The store is a closed world over the snapshot: every
  ILSVRC synset answers the inverse-mapping query (most with no claimant)
  and every snapshot item answers label queries for the en, da and
  da-then-en chains plus the disambiguation check; anything else is a
  deliberate fixture miss.
- `audit/table1.tsv` - the seven curated difficult-match rows;
  `audit/suspects.tsv` - three matched rows of which one points at a
  disambiguation item and one has a diverged P2888 target.
"""


def main() -> None:
    class_index = load_class_index(FIXTURES / "imagenet_class_index.json")
    labels = {qid: dict(items) for qid, _w, _s, _b, items in PINNED_ITEMS if items}
    for qid, extra in EXTRA_LABELS.items():
        labels.setdefault(qid, {}).update(extra)

    rows = build_item_table(class_index)
    write_source_tables(rows, labels)

    responses_dir = FIXTURES / "responses"
    if responses_dir.exists():
        for stale in responses_dir.glob("*.json"):
            stale.unlink()
    responses_dir.mkdir(parents=True, exist_ok=True)
    responses = build_responses(rows, labels, class_index)
    for digest, body in responses.items():
        (responses_dir / f"{digest}.json").write_text(body + "\n")

    write_audit_tables()
    (FIXTURES / "README.md").write_text(README)

    bins = Counter(statements for _q, _k, _b, statements in rows)
    print(f"items: {len(rows)}  babelnet co-links: {sum(1 for r in rows if r[2])}")
    print(f"histogram mode: {max(bins, key=lambda c: (bins[c], -c))}  bins: {len(bins)}")
    print(f"responses: {len(responses)}")


if __name__ == "__main__":
    main()
