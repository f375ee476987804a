import json
import os
import subprocess
import sys
import threading
import time
import urllib.request

import pytest

from synsetlink.endpoint import FixtureEndpoint
from synsetlink.ilsvrc import load_class_index
from synsetlink.resolver import Resolver
from synsetlink.service import make_server


@pytest.fixture(scope="module")
def server(request):
    fixtures = request.config.rootpath / "fixtures"
    resolver = Resolver(endpoint=FixtureEndpoint(fixtures))
    class_index = load_class_index(fixtures / "imagenet_class_index.json")
    server = make_server(resolver, class_index, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def get(server, path):
    try:
        with urllib.request.urlopen(f"{server.url}{path}") as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as error:
        return error.code, json.loads(error.read())


def test_health(server):
    status, payload = get(server, "/v1/health")
    assert status == 200
    assert payload == {"status": "ok"}


def test_label_mashed_potato(server):
    status, payload = get(server, "/v1/label?synset=n07711569&lang=en")
    assert status == 200
    assert payload["qid"] == "Q322787"
    assert payload["label"] == "mashed potato"
    assert payload["lang"] == "en"
    assert payload["multiplicity"] is False
    assert set(payload) == {"synset", "qid", "label", "lang", "cache", "multiplicity"}


def test_repeat_request_reports_cache_hit(server):
    first_status, first = get(server, "/v1/label?synset=n04033901&lang=en")
    second_status, second = get(server, "/v1/label?synset=n04033901&lang=en")
    assert (first_status, second_status) == (200, 200)
    assert first["cache"] == "miss"
    assert second["cache"] == "hit"
    assert second["qid"] == first["qid"] == "Q4063215"


def test_unknown_synset_is_200_with_null_qid(server):
    status, payload = get(server, "/v1/label?synset=n07930864&lang=da")
    assert status == 200
    assert payload["qid"] is None
    assert payload["label"] is None


def test_malformed_synset_is_400(server):
    status, payload = get(server, "/v1/label?synset=banana&lang=en")
    assert status == 400
    assert "error" in payload


def test_bad_language_is_400(server):
    status, _ = get(server, "/v1/label?synset=n07711569&lang=EN!")
    assert status == 400


def test_missing_parameters_is_400(server):
    status, _ = get(server, "/v1/label?lang=en")
    assert status == 400
    status, _ = get(server, "/v1/label?synset=n07711569&index=3&lang=en")
    assert status == 400


def test_lookup_by_class_index(server):
    status, payload = get(server, "/v1/label?index=954&lang=en")
    assert status == 200
    assert payload["synset"] == "n07753592"
    assert payload["qid"] == "Q503"
    assert payload["label"] == "banana"


def test_out_of_range_index_is_400(server):
    status, _ = get(server, "/v1/label?index=1000&lang=en")
    assert status == 400
    status, _ = get(server, "/v1/label?index=banana&lang=en")
    assert status == 400


def test_danish_label_with_default_fallback(server):
    status, payload = get(server, "/v1/label?synset=n04554684&lang=da")
    assert status == 200
    assert payload["label"] == "vaskemaskine"
    assert payload["lang"] == "da"


def test_fallback_applies_when_language_missing(server):
    status, payload = get(server, "/v1/label?synset=n03868863&lang=da")
    assert status == 200
    assert payload["label"] == "oxygen mask"
    assert payload["lang"] == "en"


def test_unknown_route_is_404(server):
    status, _ = get(server, "/v2/label?synset=n07711569")
    assert status == 404


def test_unrecorded_synset_is_a_502_backend_failure(server):
    # linked in no fixture and not recorded as empty either
    status, payload = get(server, "/v1/label?synset=n99999999&lang=en")
    assert status == 502
    assert "error" in payload


def test_serve_cli_announces_url_and_answers(request):
    repo_root = request.config.rootpath
    env = dict(os.environ, PYTHONPATH=str(repo_root / "src"))
    process = subprocess.Popen(
        [
            sys.executable, "-m", "synsetlink",
            "--fixtures", str(repo_root / "fixtures"),
            "serve", "--port", "0",
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
        env=env,
        cwd=repo_root,
    )
    try:
        line = process.stdout.readline().strip()
        assert line.startswith("serving on http://")
        url = line.removeprefix("serving on ")
        deadline = time.monotonic() + 10
        payload = None
        while time.monotonic() < deadline:
            try:
                with urllib.request.urlopen(f"{url}/v1/label?synset=n07711569&lang=en") as resp:
                    payload = json.loads(resp.read())
                break
            except OSError:
                time.sleep(0.05)
        assert payload is not None, "service did not answer in time"
        assert payload["qid"] == "Q322787"
    finally:
        process.terminate()
        process.wait(timeout=10)


def test_no_network_beyond_listener_with_fixtures(request):
    fixtures = request.config.rootpath / "fixtures"
    endpoint = FixtureEndpoint(fixtures)
    resolver = Resolver(endpoint=endpoint)
    class_index = load_class_index(fixtures / "imagenet_class_index.json")
    server = make_server(resolver, class_index, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        before = endpoint.calls
        status, _ = get(server, "/v1/label?synset=n07711569&lang=en")
        assert status == 200
        # one resolution + one label fetch, both against the replay store
        assert endpoint.calls == before + 2
        get(server, "/v1/label?synset=n07711569&lang=en")
        assert endpoint.calls == before + 2  # cached: no further backend calls
    finally:
        server.shutdown()
        server.server_close()
