"""Execution of SPARQL queries against a WDQS-compatible HTTP endpoint.

Two interchangeable backends expose ``execute(query) -> list[ResultRow]``:

* :class:`HttpEndpoint` — live HTTP with retries, exponential backoff and
  polite request spacing. The HTTP transport and the clock are injectable
  so behaviour is fully testable without sockets or real sleeping.
* :class:`FixtureEndpoint` — deterministic replay of recorded responses,
  keyed by the canonicalized query's content hash
  (``<dir>/responses/<sha256>.json``).
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from synsetlink.sparql import (
    MalformedResults,
    ResultRow,
    ShapeMismatch,
    SparqlQuery,
    canonicalize_query,
    parse_results,
    query_hash,
)

DEFAULT_ENDPOINT_URL = "https://query.wikidata.org/sparql"
ENDPOINT_ENV_VAR = "SYNSETLINK_ENDPOINT"
FIXTURES_ENV_VAR = "SYNSETLINK_FIXTURES"
SPARQL_JSON_MEDIA_TYPE = "application/sparql-results+json"

# Queries longer than this are sent as form-encoded POST bodies.
POST_THRESHOLD = 2_000

DEFAULT_USER_AGENT = (
    "synsetlink/0.1 (https://github.com/synsetlink/synsetlink) python-requests"
)


def default_endpoint_url() -> str:
    return os.environ.get(ENDPOINT_ENV_VAR, DEFAULT_ENDPOINT_URL)


class EndpointError(Exception):
    """A failed query execution. ``kind`` is one of network, http_status,
    malformed_body, timeout, rate_limited; http_status carries the code."""

    def __init__(self, kind: str, detail: str, status: int | None = None):
        self.kind = kind
        self.detail = detail
        self.status = status
        label = f"{kind}({status})" if status is not None else kind
        super().__init__(f"{label}: {detail}")


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str = DEFAULT_ENDPOINT_URL
    timeout_ms: int = 30_000
    max_retries: int = 2
    backoff_base_ms: int = 500
    min_request_interval_ms: int = 1_000
    user_agent: str = DEFAULT_USER_AGENT

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.min_request_interval_ms < 0:
            raise ValueError("min_request_interval_ms must be >= 0")


class Clock(Protocol):
    def now(self) -> float: ...
    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)


# transport(method, url, params, headers, timeout_s) -> (status_code, body_bytes)
Transport = Callable[[str, str, dict[str, str], dict[str, str], float], tuple[int, bytes]]


def _requests_transport(
    method: str,
    url: str,
    params: dict[str, str],
    headers: dict[str, str],
    timeout_s: float,
) -> tuple[int, bytes]:
    import requests

    try:
        if method == "GET":
            response = requests.get(url, params=params, headers=headers, timeout=timeout_s)
        else:
            response = requests.post(url, data=params, headers=headers, timeout=timeout_s)
    except requests.Timeout as exc:
        raise EndpointError("timeout", str(exc)) from exc
    except requests.RequestException as exc:
        raise EndpointError("network", str(exc)) from exc
    return response.status_code, response.content


class SparqlEndpoint(Protocol):
    def execute(self, query: SparqlQuery) -> list[ResultRow]: ...


class HttpEndpoint:
    """Live endpoint client. Retries 429 and 5xx with exponential backoff
    (``backoff_base * 2**attempt``); other failures surface immediately.
    Dispatch times are serialized so consecutive requests are spaced by at
    least ``min_request_interval_ms``."""

    def __init__(
        self,
        config: EndpointConfig | None = None,
        transport: Transport | None = None,
        clock: Clock | None = None,
    ):
        self.config = config or EndpointConfig(base_url=default_endpoint_url())
        self._transport = transport or _requests_transport
        self._clock = clock or SystemClock()
        self._dispatch_lock = threading.Lock()
        self._next_dispatch = self._clock.now()
        self.calls = 0
        self.requests_sent = 0

    def _wait_for_slot(self) -> None:
        interval = self.config.min_request_interval_ms / 1000.0
        with self._dispatch_lock:
            wait = self._next_dispatch - self._clock.now()
            if wait > 0:
                self._clock.sleep(wait)
            self._next_dispatch = self._clock.now() + interval

    def execute(self, query: SparqlQuery) -> list[ResultRow]:
        self.calls += 1
        config = self.config
        method = "GET" if len(query.text) <= POST_THRESHOLD else "POST"
        params = {"query": query.text, "format": "json"}
        headers = {
            "Accept": SPARQL_JSON_MEDIA_TYPE,
            "User-Agent": config.user_agent,
        }
        timeout_s = config.timeout_ms / 1000.0
        last_status: int | None = None
        for attempt in range(config.max_retries + 1):
            self._wait_for_slot()
            self.requests_sent += 1
            status, body = self._transport(
                method, config.base_url, params, headers, timeout_s
            )
            last_status = status
            if 200 <= status < 300:
                try:
                    return parse_results(body, query.shape)
                except (MalformedResults, ShapeMismatch) as exc:
                    raise EndpointError("malformed_body", str(exc)) from exc
            if status != 429 and not 500 <= status < 600:
                raise EndpointError("http_status", f"endpoint returned {status}", status)
            if attempt < config.max_retries:
                self._clock.sleep(config.backoff_base_ms / 1000.0 * 2**attempt)
        if last_status == 429:
            raise EndpointError("rate_limited", "throttled and retries exhausted", 429)
        raise EndpointError(
            "http_status", f"endpoint returned {last_status} after retries", last_status
        )


class FixtureEndpoint:
    """Replay backend: responses recorded under ``<dir>/responses/<hash>.json``.

    Two queries differing only in whitespace hit the same fixture. Unknown
    queries fail with http_status(404) and a "fixture miss" detail, which is
    distinguishable from a network failure.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.calls = 0

    def execute(self, query: SparqlQuery) -> list[ResultRow]:
        self.calls += 1
        digest = query_hash(query.text)
        path = self.directory / "responses" / f"{digest}.json"
        if not path.is_file():
            raise EndpointError(
                "http_status",
                f"fixture miss: no recorded response {digest}.json "
                f"for query {canonicalize_query(query.text)[:80]!r}...",
                404,
            )
        try:
            return parse_results(path.read_bytes(), query.shape)
        except (MalformedResults, ShapeMismatch) as exc:
            raise EndpointError("malformed_body", str(exc)) from exc


def record_fixture(directory: str | Path, query_text: str, body: str) -> Path:
    """Store a response body for a query in a fixture directory."""
    responses = Path(directory) / "responses"
    responses.mkdir(parents=True, exist_ok=True)
    path = responses / f"{query_hash(query_text)}.json"
    path.write_text(body, encoding="utf-8")
    return path
