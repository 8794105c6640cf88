"""Macro-averaged ROUGE F1 for a system's outputs."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import EmptyReferenceSet, MissingPrediction
from .rouge import RougeScore, score_pair


@dataclass
class EvalReport:
    system_name: str
    n_examples: int
    r1_f1: float
    r2_f1: float
    rl_f1: float
    per_example: dict[str, RougeScore] = field(default_factory=dict, repr=False)

    def row(self) -> list[str]:
        return [self.system_name, str(self.n_examples), f"{self.r1_f1:.2f}", f"{self.r2_f1:.2f}", f"{self.rl_f1:.2f}"]


def evaluate_system(
    predictions: Mapping[str, str],
    references: Mapping[str, str],
    system_name: str = "system",
    stem: bool = False,
) -> EvalReport:
    """Score every reference id; F1 means are reported on a 0-100 scale.

    Examples are scored in sorted id order and summed with ``math.fsum`` so the
    report does not depend on input ordering.
    """
    if not references:
        raise EmptyReferenceSet("no references to evaluate against")
    ids = sorted(references)
    for i in ids:
        if i not in predictions:
            raise MissingPrediction(i)
    per = {i: score_pair(predictions[i], references[i], stem=stem) for i in ids}
    n = len(ids)

    def mean(attr):
        return 100.0 * math.fsum(getattr(s, attr).f1 for s in per.values()) / n

    return EvalReport(system_name, n, mean("r1"), mean("r2"), mean("rl"), per)


HEADER = ["system", "n", "R-1", "R-2", "R-L"]


def write_report_csv(reports, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for r in reports:
            w.writerow(r.row())


def format_table(reports) -> str:
    rows = [HEADER] + [r.row() for r in reports]
    widths = [max(len(row[c]) for row in rows) for c in range(len(HEADER))]
    lines = []
    for k, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
