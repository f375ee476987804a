import json
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def golden_queries() -> dict[str, str]:
    return {
        path.stem: path.read_text(encoding="utf-8")
        for path in (FIXTURES_DIR / "queries").glob("*.rq")
    }


class VirtualClock:
    """Deterministic clock: ``sleep`` advances time and records durations."""

    def __init__(self, start: float = 0.0):
        self.current = start
        self.sleeps: list[float] = []

    def now(self) -> float:
        return self.current

    def sleep(self, seconds: float) -> None:
        self.sleeps.append(seconds)
        self.current += seconds

    def advance(self, seconds: float) -> None:
        self.current += seconds

    def __call__(self) -> float:
        return self.current


@pytest.fixture
def virtual_clock() -> VirtualClock:
    return VirtualClock()


def sparql_json(rows: list[dict[str, object]]) -> str:
    """Build a SPARQL 1.1 JSON results document from simple row dicts.

    ``int`` values become xsd:integer literals, strings starting with
    ``http`` become IRIs, ``(value, lang)`` tuples become tagged literals,
    and plain strings become untyped literals.
    """
    variables: list[str] = []
    bindings = []
    for row in rows:
        encoded = {}
        for name, value in row.items():
            if name not in variables:
                variables.append(name)
            if isinstance(value, int):
                encoded[name] = {
                    "type": "literal",
                    "datatype": "http://www.w3.org/2001/XMLSchema#integer",
                    "value": str(value),
                }
            elif isinstance(value, tuple):
                text, lang = value
                encoded[name] = {"type": "literal", "xml:lang": lang, "value": text}
            elif value.startswith("http"):
                encoded[name] = {"type": "uri", "value": value}
            else:
                encoded[name] = {"type": "literal", "value": value}
        bindings.append(encoded)
    return json.dumps({"head": {"vars": variables}, "results": {"bindings": bindings}})
