import json
import os
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest

DEMO_ROOT = Path(__file__).resolve().parent.parent
PRIMARY_ROOT = DEMO_ROOT.parent
FIXTURES_DIR = PRIMARY_ROOT / "fixtures"
CLASS_INDEX = FIXTURES_DIR / "imagenet_class_index.json"


def primary_env() -> dict[str, str]:
    env = dict(os.environ)
    env["PYTHONPATH"] = str(PRIMARY_ROOT / "src")
    return env


def primary_cli(*args: str) -> subprocess.CompletedProcess:
    """Invoke the primary package's CLI the way any external consumer would."""
    return subprocess.run(
        [sys.executable, "-m", "synsetlink", *args],
        capture_output=True,
        text=True,
        env=primary_env(),
        cwd=PRIMARY_ROOT,
    )


@pytest.fixture(scope="session")
def service_url():
    """A fixture-backed synsetlink service running in a subprocess."""
    process = subprocess.Popen(
        [
            sys.executable, "-m", "synsetlink",
            "--fixtures", str(FIXTURES_DIR),
            "serve", "--port", "0",
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
        env=primary_env(),
        cwd=PRIMARY_ROOT,
    )
    line = process.stdout.readline().strip()
    assert line.startswith("serving on "), f"unexpected service banner: {line!r}"
    url = line.removeprefix("serving on ")
    deadline = time.monotonic() + 10
    while time.monotonic() < deadline:
        try:
            with urllib.request.urlopen(f"{url}/v1/health") as response:
                if json.loads(response.read()).get("status") == "ok":
                    break
        except OSError:
            time.sleep(0.05)
    else:
        process.terminate()
        raise RuntimeError("service did not become healthy")
    yield url
    process.terminate()
    process.wait(timeout=10)
