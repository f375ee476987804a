"""demo-labeler: render localized labels for classifier predictions.

Subcommands: ``run`` (predictions TSV -> labeled lines via the synsetlink
service) and ``stub`` (generate a stand-in predictions file from a class
table, replacing live camera + model inference).
"""

from __future__ import annotations

import argparse
import os
import sys

from demo_labeler.labeler import (
    DEFAULT_SERVICE_URL,
    PredictionError,
    SERVICE_ENV_VAR,
    run,
    stub_predictions,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="demo-labeler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    runner = sub.add_parser("run", help="label a predictions file via the service")
    runner.add_argument("predictions", help="TSV file: synset<TAB>probability")
    runner.add_argument(
        "--service", default=None,
        help=f"service URL (default: ${SERVICE_ENV_VAR} or {DEFAULT_SERVICE_URL})",
    )
    runner.add_argument("--lang", default="en", help="label language tag (default en)")

    stub = sub.add_parser("stub", help="generate a stand-in predictions file")
    stub.add_argument("n", type=int, help="number of rows")
    stub.add_argument("--class-index", required=True, help="class table JSON")
    stub.add_argument("--out", default="predictions.tsv", help="output TSV path")
    stub.add_argument("--seed", type=int, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "stub":
        try:
            predictions = stub_predictions(args.n, args.class_index, args.out, args.seed)
        except (PredictionError, OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {len(predictions)} predictions to {args.out}", file=sys.stderr)
        return 0
    service = args.service or os.environ.get(SERVICE_ENV_VAR, DEFAULT_SERVICE_URL)
    try:
        return run(args.predictions, service, args.lang)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
