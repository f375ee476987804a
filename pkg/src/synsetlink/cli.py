"""The synsetlink command-line interface.

Backends, in default-selection order: ``--fixtures DIR`` /
``SYNSETLINK_FIXTURES`` / a ``./fixtures`` store (recorded responses),
then ``SYNSETLINK_ENDPOINT`` (live). ``--endpoint URL`` forces a live
SPARQL endpoint, ``--snapshot DIR`` an offline TSV store.

Exit codes: 0 success, 1 usage, 2 endpoint failure, 3 validation failure.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from synsetlink.audit import (
    MatchTableError,
    audit_report,
    flag_suspect_matches,
    load_match_table,
)
from synsetlink.endpoint import (
    ENDPOINT_ENV_VAR,
    EndpointConfig,
    EndpointError,
    FIXTURES_ENV_VAR,
    FixtureEndpoint,
    HttpEndpoint,
    default_endpoint_url,
)
from synsetlink.identifiers import (
    IdentifierError,
    UriStyle,
    imagenet_to_uri,
    parse_imagenet_id,
    parse_wordnet_uri,
    uri_to_imagenet,
)
from synsetlink.ilsvrc import ClassIndexError, load_class_index
from synsetlink.resolver import LabelRecord, Resolver, SnapshotError, SnapshotStore
from synsetlink.service import label_response, make_server
from synsetlink.stats import (
    babelnet_usage,
    cooccurrence,
    count_linked,
    emit_histogram_csv,
    histogram,
    statement_counts,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ENDPOINT = 2
EXIT_VALIDATION = 3

DRIFT_WARNING = (
    "warning: live endpoint values drift over time; the pinned reference "
    "numbers live in the bundled fixture store"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D401 (argparse API)
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="synsetlink", description=__doc__.splitlines()[0])
    backend = parser.add_mutually_exclusive_group()
    backend.add_argument(
        "--endpoint", metavar="URL", help="query a live SPARQL endpoint at URL"
    )
    backend.add_argument("--fixtures", metavar="DIR", help="replay recorded responses")
    backend.add_argument("--snapshot", metavar="DIR", help="use an offline TSV snapshot")
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="convert between synset id and LOD URI")
    convert.add_argument("value", help="an ImageNet id (nXXXXXXXX) or a WordNet URI")
    convert.add_argument(
        "--style", choices=["legacy", "canonical"], default="legacy",
        help="URI prefix style to emit (default legacy, i.e. wn30)",
    )

    resolve = sub.add_parser("resolve", help="resolve a synset to Wikidata item(s)")
    resolve.add_argument("value", help="an ImageNet id or a WordNet 3.0 URI")

    label = sub.add_parser("label", help="resolve and fetch a localized label")
    label.add_argument("value", help="an ImageNet id or a WordNet 3.0 URI")
    label.add_argument("--lang", required=True, help="preferred language tag")
    label.add_argument(
        "--fallback", nargs="*", default=["en"], metavar="TAG",
        help="fallback language tags (default: en)",
    )

    stats = sub.add_parser("stats", help="linkage statistics")
    stats.add_argument(
        "metric", choices=["count", "histogram", "cooccurrence", "babelnet"]
    )
    stats.add_argument("--csv", metavar="PATH", help="write the histogram as CSV")
    stats.add_argument("--prefix", default=None, help="override the WordNet URI prefix")

    audit = sub.add_parser("audit", help="validate and report on a match table")
    audit.add_argument("table", metavar="TABLE.tsv")
    audit.add_argument("--tsv", metavar="PATH", help="also write status counts as TSV")
    audit.add_argument(
        "--check", action="store_true",
        help="flag disambiguation/divergent records against the backend",
    )

    snapshot = sub.add_parser("snapshot", help="save or load an offline snapshot")
    snapshot.add_argument("action", choices=["save", "load"])
    snapshot.add_argument("directory", metavar="DIR")
    snapshot.add_argument(
        "--langs", nargs="*", default=["en", "da"], metavar="TAG",
        help="label languages to save (default: en da)",
    )
    snapshot.add_argument("--class-index", metavar="PATH", help="class list to iterate")

    serve = sub.add_parser("serve", help="run the label-resolution HTTP service")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--class-index", metavar="PATH", help="class list for index lookups")

    return parser


def find_fixture_dir(explicit: str | None) -> Path | None:
    """The fixture store to use: flag, then env, then ./fixtures.

    An explicitly named directory must be a store; auto-discovery returns
    None when there is nothing suitable.
    """
    for candidate in (explicit, os.environ.get(FIXTURES_ENV_VAR)):
        if candidate:
            path = Path(candidate)
            if not (path / "responses").is_dir():
                raise UsageError(f"{path} is not a fixture store (missing responses/)")
            return path
    local = Path("fixtures")
    if (local / "responses").is_dir():
        return local
    return None


def build_resolver(args: argparse.Namespace) -> Resolver:
    if args.snapshot:
        return Resolver(snapshot=SnapshotStore.load(args.snapshot))
    return Resolver(endpoint=build_endpoint(args))


def build_endpoint(args: argparse.Namespace):
    if args.endpoint:
        return HttpEndpoint(EndpointConfig(base_url=args.endpoint))
    fixtures = find_fixture_dir(args.fixtures)
    if fixtures is not None:
        return FixtureEndpoint(fixtures)
    env_url = default_endpoint_url() if os.environ.get(ENDPOINT_ENV_VAR) else None
    if env_url:
        return HttpEndpoint(EndpointConfig(base_url=env_url))
    raise UsageError(
        "no backend selected and no fixture store found; pass --fixtures DIR "
        f"or --endpoint URL, or set {FIXTURES_ENV_VAR} / {ENDPOINT_ENV_VAR}"
    )


def default_class_index_path(args: argparse.Namespace) -> Path:
    explicit = getattr(args, "class_index", None)
    if explicit:
        return Path(explicit)
    fixtures = find_fixture_dir(args.fixtures)
    if fixtures and (fixtures / "imagenet_class_index.json").is_file():
        return fixtures / "imagenet_class_index.json"
    raise UsageError("no class index found; pass --class-index PATH")


def parse_id_or_uri(value: str):
    if value.startswith("http://") or value.startswith("https://"):
        return parse_wordnet_uri(value)
    return parse_imagenet_id(value)


def cmd_convert(args: argparse.Namespace) -> int:
    if args.value.startswith("http://") or args.value.startswith("https://"):
        print(uri_to_imagenet(parse_wordnet_uri(args.value)).text)
    else:
        style = UriStyle(args.style)
        print(imagenet_to_uri(parse_imagenet_id(args.value), style=style).text)
    return EXIT_OK


def cmd_resolve(args: argparse.Namespace) -> int:
    resolver = build_resolver(args)
    resolution = resolver.resolve_synset(parse_id_or_uri(args.value))
    for qid in resolution.qids:
        print(qid.text)
    return EXIT_OK


def cmd_label(args: argparse.Namespace) -> int:
    resolver = build_resolver(args)
    outcome = resolver.resolve_and_label(
        parse_id_or_uri(args.value), args.lang, tuple(args.fallback)
    )
    print(json.dumps(label_response(outcome, args.lang)))
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    endpoint = build_endpoint(args)
    if isinstance(endpoint, HttpEndpoint):
        print(DRIFT_WARNING, file=sys.stderr)
    prefix_args = (args.prefix,) if args.prefix else ()
    if args.metric == "count":
        print(count_linked(endpoint, *prefix_args))
    elif args.metric == "cooccurrence":
        print(cooccurrence(endpoint, *prefix_args))
    elif args.metric == "babelnet":
        print(babelnet_usage(endpoint))
    else:
        h = histogram(endpoint, *prefix_args)
        if args.csv:
            emit_histogram_csv(h, args.csv)
            print(f"wrote {args.csv}", file=sys.stderr)
        else:
            print("count,frequency")
            for count in sorted(h.bins):
                print(f"{count},{h.bins[count]}")
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    records = load_match_table(args.table)
    report = audit_report(records)
    print(report.render_text())
    if args.tsv:
        Path(args.tsv).write_text(report.render_tsv(), encoding="utf-8")
    if args.check:
        flags = flag_suspect_matches(records, build_endpoint(args))
        for record, reason in flags:
            print(f"{record.imagenet.text}\t{reason}")
    return EXIT_OK


def cmd_snapshot(args: argparse.Namespace) -> int:
    if args.action == "load":
        store = SnapshotStore.load(args.directory)
        print(f"loaded snapshot from {args.directory}: {len(store)} entries")
        return EXIT_OK
    resolver = build_resolver(args)
    class_index = load_class_index(default_class_index_path(args))
    store = SnapshotStore()
    mappings = labels = 0
    for entry in class_index.entries:
        try:
            resolution = resolver.resolve_synset(entry.imagenet)
        except EndpointError:
            continue  # not recorded / unreachable: stays unknown
        for qid in resolution.qids:
            store.add_mapping(resolution.synset, qid)
            mappings += 1
            for lang in args.langs:
                try:
                    record = resolver.get_label(qid, lang, ())
                except EndpointError:
                    continue
                if record is not None and record.language == lang:
                    store.add_label(LabelRecord(qid, lang, record.label))
                    labels += 1
    store.save(args.directory)
    print(f"saved snapshot to {args.directory}: {mappings} mappings, {labels} labels")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    resolver = build_resolver(args)
    class_index = load_class_index(default_class_index_path(args))
    server = make_server(resolver, class_index, host=args.host, port=args.port)
    print(f"serving on {server.url}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


_COMMANDS = {
    "convert": cmd_convert,
    "resolve": cmd_resolve,
    "label": cmd_label,
    "stats": cmd_stats,
    "audit": cmd_audit,
    "snapshot": cmd_snapshot,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EndpointError as exc:
        print(f"endpoint error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except (IdentifierError, SnapshotError, MatchTableError, ClassIndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
