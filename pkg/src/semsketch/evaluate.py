"""Shared-task accuracy: matched context/sketch pairs over the number of gold contexts."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Mapping as TMapping

log = logging.getLogger(__name__)


@dataclass
class ScoreReport:
    accuracy: float
    n_correct: int
    n_total: int
    per_sketch: dict[str, tuple[int, int]] = field(default_factory=dict)
    n_extraneous: int = 0
    n_missing: int = 0

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "n_correct": self.n_correct,
            "n_total": self.n_total,
            "n_missing": self.n_missing,
            "n_extraneous": self.n_extraneous,
            "per_sketch": {k: {"correct": c, "total": t} for k, (c, t) in sorted(self.per_sketch.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=1) + "\n"


def accuracy(pred: TMapping[str, str], gold: TMapping[str, str]) -> ScoreReport:
    """Score predictions against gold.

    Gold contexts missing from ``pred`` count as wrong. Predictions for
    contexts absent from gold are ignored and only counted.
    """
    per_sketch: dict[str, list[int]] = {}
    n_correct = n_missing = 0
    for ctx_id, sketch_id in gold.items():
        bucket = per_sketch.setdefault(sketch_id, [0, 0])
        bucket[1] += 1
        guess = pred.get(ctx_id)
        if guess is None:
            n_missing += 1
        elif guess == sketch_id:
            bucket[0] += 1
            n_correct += 1
    n_extraneous = sum(1 for ctx_id in pred if ctx_id not in gold)
    if n_extraneous:
        log.warning("%d predicted contexts are not in gold and were ignored", n_extraneous)
    n_total = len(gold)
    if n_total == 0:
        log.warning("gold mapping is empty; accuracy reported as 0")
    return ScoreReport(
        accuracy=n_correct / n_total if n_total else 0.0,
        n_correct=n_correct,
        n_total=n_total,
        per_sketch={k: (c, t) for k, (c, t) in per_sketch.items()},
        n_extraneous=n_extraneous,
        n_missing=n_missing,
    )


def format_accuracy(value: float) -> str:
    return f"{value:.4f}"
