#!/usr/bin/env python3
"""Print the linkage statistics from a live WDQS-compatible endpoint.

Live values drift as the graph is edited, so nothing here is asserted;
the pinned reference snapshot lives in fixtures/. Respect the public
endpoint: requests are spaced one second apart by default.

Usage: PYTHONPATH=src python3 scripts/live_stats.py [endpoint-url]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from synsetlink.endpoint import EndpointConfig, HttpEndpoint, default_endpoint_url
from synsetlink.stats import babelnet_usage, cooccurrence, count_linked, histogram


def main() -> int:
    url = sys.argv[1] if len(sys.argv) > 1 else default_endpoint_url()
    endpoint = HttpEndpoint(EndpointConfig(base_url=url))
    print(f"endpoint: {url}")
    print("note: live values drift; reference numbers are pinned in fixtures/")
    print(f"linked wn30 statements: {count_linked(endpoint)}")
    print(f"wn30 + babelnet co-links: {cooccurrence(endpoint)}")
    print(f"babelnet statements: {babelnet_usage(endpoint)}")
    h = histogram(endpoint)
    print(f"statement-count mode: {h.mode} over {h.total_items} items")
    return 0


if __name__ == "__main__":
    sys.exit(main())
