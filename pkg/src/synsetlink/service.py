"""A minimal HTTP label-resolution service over a resolver and class table.

Routes (HTTP/1.1, JSON responses, UTF-8):

* ``GET /v1/health`` -> 200 ``{"status": "ok"}``
* ``GET /v1/label?synset=<nID>&lang=<tag>[&fallback=<tag,...>]``
* ``GET /v1/label?index=<0..999>&lang=<tag>[&fallback=<tag,...>]``

An unlinked synset is a successful lookup (200 with ``qid: null``);
malformed parameters are 400; backend failures are 502.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from synsetlink.endpoint import EndpointError
from synsetlink.identifiers import IdentifierError, parse_imagenet_id
from synsetlink.ilsvrc import ClassIndex, ClassIndexError
from synsetlink.resolver import ResolvedLabel, Resolver
from synsetlink.sparql import is_valid_language_tag


class BadRequest(ValueError):
    pass


def label_response(outcome: ResolvedLabel, requested_lang: str) -> dict:
    """The service's wire form of a resolve-and-label outcome.

    ``lang`` is the language of the returned label, or the requested tag
    when no label was found.
    """
    return {
        "synset": f"{outcome.synset.pos.letter}{outcome.synset.offset_text}",
        "qid": outcome.qid.text if outcome.qid else None,
        "label": outcome.label,
        "lang": outcome.language if outcome.language else requested_lang,
        "cache": "hit" if outcome.cache_hit else "miss",
        "multiplicity": outcome.multiplicity,
    }


class LabelService:
    def __init__(self, resolver: Resolver, class_index: ClassIndex):
        self.resolver = resolver
        self.class_index = class_index

    def handle_label(self, params: dict[str, list[str]]) -> dict:
        synset = _single(params, "synset")
        index = _single(params, "index")
        if (synset is None) == (index is None):
            raise BadRequest("pass exactly one of synset= or index=")
        if synset is not None:
            try:
                imagenet_id = parse_imagenet_id(synset)
            except IdentifierError as exc:
                raise BadRequest(str(exc)) from None
        else:
            try:
                imagenet_id = self.class_index.index_to_id(int(index))
            except (ValueError, ClassIndexError) as exc:
                raise BadRequest(f"bad class index {index!r}: {exc}") from None
        lang = _single(params, "lang") or "en"
        if not is_valid_language_tag(lang):
            raise BadRequest(f"not a lowercase language tag: {lang!r}")
        fallback_param = _single(params, "fallback")
        if fallback_param is None:
            fallback = None  # resolver default
        else:
            fallback = tuple(tag for tag in fallback_param.split(",") if tag)
            for tag in fallback:
                if not is_valid_language_tag(tag):
                    raise BadRequest(f"not a lowercase language tag: {tag!r}")
        outcome = self.resolver.resolve_and_label(imagenet_id, lang, fallback)
        return label_response(outcome, lang)


def _single(params: dict[str, list[str]], name: str) -> str | None:
    values = params.get(name)
    if not values:
        return None
    if len(values) > 1:
        raise BadRequest(f"parameter {name} given more than once")
    return values[0]


class _Handler(BaseHTTPRequestHandler):
    service: LabelService  # set on the server class

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        url = urlsplit(self.path)
        if url.path == "/v1/health":
            self._send(200, {"status": "ok"})
            return
        if url.path != "/v1/label":
            self._send(404, {"error": f"no such route: {url.path}"})
            return
        try:
            payload = self.server.service.handle_label(parse_qs(url.query))
        except BadRequest as exc:
            self._send(400, {"error": str(exc)})
        except EndpointError as exc:
            self._send(502, {"error": str(exc)})
        else:
            self._send(200, payload)

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format: str, *args) -> None:
        pass  # keep test and CLI output clean


class LabelServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, service: LabelService, host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _Handler)
        self.service = service

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def make_server(
    resolver: Resolver, class_index: ClassIndex, host: str = "127.0.0.1", port: int = 0
) -> LabelServer:
    return LabelServer(LabelService(resolver, class_index), host, port)
