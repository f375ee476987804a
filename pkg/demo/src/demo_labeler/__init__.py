"""Desk-scale labeling demo.

Reads classifier predictions (``synset\\tprobability`` TSV), asks the
synsetlink HTTP service for a localized label per row, and renders one
line per prediction: the label and a bar whose length is proportional to
the probability. A stub generator stands in for a live classifier.
"""

from demo_labeler.labeler import (
    Prediction,
    bar,
    read_predictions,
    render_line,
    run,
    stub_predictions,
)

__all__ = [
    "Prediction",
    "bar",
    "read_predictions",
    "render_line",
    "run",
    "stub_predictions",
]
