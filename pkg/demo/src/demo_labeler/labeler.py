from __future__ import annotations

import json
import random
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import requests

DEFAULT_SERVICE_URL = "http://127.0.0.1:8080"
SERVICE_ENV_VAR = "SYNSETLINK_SERVICE"
PREDICTIONS_HEADER = "synset\tprobability"
BAR_WIDTH = 40

_SYNSET_RE = re.compile(r"^[a-z][0-9]{8}$")


class PredictionError(ValueError):
    pass


@dataclass(frozen=True)
class Prediction:
    synset: str
    probability: float

    def __post_init__(self) -> None:
        if _SYNSET_RE.match(self.synset) is None:
            raise PredictionError(f"not a synset id: {self.synset!r}")
        if not 0.0 <= self.probability <= 1.0:
            raise PredictionError(f"probability out of [0, 1]: {self.probability}")


def bar(probability: float) -> str:
    """Probability rendered as a bar of round(p * 40) hash marks."""
    if not 0.0 <= probability <= 1.0:
        raise PredictionError(f"probability out of [0, 1]: {probability}")
    return "#" * round(probability * BAR_WIDTH)


def render_line(label: str | None, synset: str, probability: float) -> str:
    """One output line: label (or bracketed synset id) TAB bar."""
    shown = label if label else f"[{synset}]"
    return f"{shown}\t{bar(probability)}"


def read_predictions(path: str | Path, warn: TextIO | None = None) -> list[Prediction]:
    """Parse the predictions TSV, warning and skipping malformed rows."""
    warn = warn if warn is not None else sys.stderr
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if lines and lines[0] == PREDICTIONS_HEADER:
        lines = lines[1:]
    predictions = []
    for row, line in enumerate(lines, start=1):
        fields = line.split("\t")
        try:
            if len(fields) != 2:
                raise PredictionError(f"expected 2 tab-separated fields, got {len(fields)}")
            predictions.append(Prediction(fields[0], float(fields[1])))
        except (PredictionError, ValueError) as exc:
            print(f"warning: skipping row {row}: {exc}", file=warn)
    return predictions


def fetch_label(service_url: str, synset: str, lang: str) -> str | None:
    """One GET against /v1/label; None when the service has no label."""
    response = requests.get(
        f"{service_url.rstrip('/')}/v1/label",
        params={"synset": synset, "lang": lang},
        timeout=30,
    )
    if response.status_code != 200:
        raise PredictionError(
            f"service answered {response.status_code} for {synset}: {response.text.strip()}"
        )
    return response.json().get("label")


def run(
    predictions_path: str | Path,
    service_url: str = DEFAULT_SERVICE_URL,
    lang: str = "en",
    out: TextIO | None = None,
    warn: TextIO | None = None,
) -> int:
    """Render one labeled line per prediction row. Returns the exit code:
    nonzero when the service is unreachable, zero otherwise (malformed
    rows and per-row service errors only warn)."""
    out = out if out is not None else sys.stdout
    warn = warn if warn is not None else sys.stderr
    predictions = read_predictions(predictions_path, warn=warn)
    for prediction in predictions:
        try:
            label = fetch_label(service_url, prediction.synset, lang)
        except requests.ConnectionError as exc:
            print(f"error: service unreachable at {service_url}: {exc}", file=warn)
            return 1
        except (requests.RequestException, PredictionError, json.JSONDecodeError) as exc:
            print(f"warning: {exc}", file=warn)
            continue
        print(render_line(label, prediction.synset, prediction.probability), file=out)
    return 0


def stub_predictions(
    n: int,
    class_index_path: str | Path,
    out_path: str | Path,
    seed: int | None = None,
) -> list[Prediction]:
    """Write ``n`` stub rows drawn from the bundled class table."""
    if n < 1:
        raise PredictionError("n must be >= 1")
    mapping = json.loads(Path(class_index_path).read_text(encoding="utf-8"))
    synsets = [entry[0] for entry in mapping.values()]
    rng = random.Random(seed)
    predictions = [
        Prediction(rng.choice(synsets), round(rng.random(), 4)) for _ in range(n)
    ]
    lines = [PREDICTIONS_HEADER]
    lines += [f"{p.synset}\t{p.probability}" for p in predictions]
    Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return predictions
