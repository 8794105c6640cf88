"""Dataset statistics and annotation sampling."""

from __future__ import annotations

import csv
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .corpus import PaperRecord
from .dataset import SPLITS, DatasetBundle, SummExample
from .errors import KTooLarge

LENGTH_NOTE = "# word counts are whitespace tokens of src/tgt; tgt counts include the REF token"
RATING_SCALE = (1, 2, 3, 4)


def top_discipline(p: PaperRecord) -> Optional[str]:
    return p.fields_of_study[0] if p.fields_of_study else None


@dataclass
class CorpusStats:
    n_examples: dict[str, int]
    mean_src_words: dict[str, float]
    mean_tgt_words: dict[str, float]
    discipline_hist: dict[str, int] = field(default_factory=dict)
    citation_hist: dict[int, int] = field(default_factory=dict)
    unique_cited_papers: int = 0
    mean_citations: float = 0.0

    @property
    def total(self) -> int:
        return self.n_examples["all"]

    @property
    def share_fewer_than_5(self) -> float:
        if not self.unique_cited_papers:
            return 0.0
        return sum(v for k, v in self.citation_hist.items() if k < 5) / self.unique_cited_papers


def _mean_words(texts) -> float:
    texts = list(texts)
    return math.fsum(len(t.split()) for t in texts) / len(texts) if texts else 0.0


def compute_stats(bundle: DatasetBundle) -> CorpusStats:
    parts = {name: bundle.split(name) for name in SPLITS}
    parts["all"] = bundle.all_examples()
    # sort so float sums do not depend on example order
    for k in parts:
        parts[k] = sorted(parts[k], key=lambda e: e.example_id)

    cites = Counter(e.cited_paper_id for e in parts["all"])
    disc = Counter(e.discipline for e in parts["all"] if e.discipline)
    n_unique = len(cites)
    return CorpusStats(
        n_examples={k: len(v) for k, v in parts.items()},
        mean_src_words={k: _mean_words(e.src for e in v) for k, v in parts.items()},
        mean_tgt_words={k: _mean_words(e.tgt for e in v) for k, v in parts.items()},
        discipline_hist=dict(sorted(disc.items(), key=lambda kv: (-kv[1], kv[0]))),
        citation_hist=dict(sorted(Counter(cites.values()).items())),
        unique_cited_papers=n_unique,
        mean_citations=len(parts["all"]) / n_unique if n_unique else 0.0,
    )


def write_stats(stats: CorpusStats, out_dir) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "lengths.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(LENGTH_NOTE + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["split", "n_examples", "mean_src_words", "mean_tgt_words"])
        for k in (*SPLITS, "all"):
            w.writerow([k, stats.n_examples[k], f"{stats.mean_src_words[k]:.2f}", f"{stats.mean_tgt_words[k]:.2f}"])
    with open(out_dir / "disciplines.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["discipline", "n_examples"])
        w.writerows(stats.discipline_hist.items())
    with open(out_dir / "citations.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["citations", "n_papers"])
        w.writerows(stats.citation_hist.items())


def sample_for_annotation(bundle: DatasetBundle, k: int, seed: int = 0) -> list[SummExample]:
    pool = bundle.all_examples()
    if k < 0 or k > len(pool):
        raise KTooLarge(f"cannot sample {k} of {len(pool)} examples")
    return random.Random(seed).sample(pool, k)


def write_annotation_sheet(examples, path) -> None:
    """CSV with an empty ``rating`` column, to be filled on a 1-4 scale."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["example_id", "src", "tgt", "rating"])
        for e in examples:
            w.writerow([e.example_id, e.src, e.tgt, ""])
