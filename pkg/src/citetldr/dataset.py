"""Final examples, group-aware splits, serialization and overlap auditing."""

from __future__ import annotations

import csv
import json
import math
import random
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import EmptyInput, SchemaViolation
from .extraction import REF_RE
from .rouge import tokenize

SPLITS = ("train", "val", "test")
DEFAULT_RATIOS = (0.90, 0.05, 0.05)


@dataclass(frozen=True)
class SummExample:
    example_id: str
    src: str
    tgt: str
    cited_paper_id: str
    citing_paper_id: str
    title: Optional[str] = None
    discipline: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping, where: str = "") -> "SummExample":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names[:5] if not isinstance(d.get(n), str)]
        if missing:
            raise SchemaViolation(f"{where}missing or non-string fields {missing}")
        for n in ("title", "discipline"):
            if d.get(n) is not None and not isinstance(d[n], str):
                raise SchemaViolation(f"{where}field {n!r} must be a string or null")
        ex = cls(**{n: d.get(n) for n in names})
        check_example(ex, where)
        return ex


def check_example(ex: SummExample, where: str = "") -> None:
    if not ex.example_id:
        raise SchemaViolation(f"{where}empty example_id")
    if not ex.src.strip():
        raise SchemaViolation(f"{where}example {ex.example_id!r} has an empty src")
    if len(REF_RE.findall(ex.tgt)) != 1:
        raise SchemaViolation(f"{where}example {ex.example_id!r} tgt must contain REF exactly once")


@dataclass
class DatasetBundle:
    train: list[SummExample] = field(default_factory=list)
    val: list[SummExample] = field(default_factory=list)
    test: list[SummExample] = field(default_factory=list)
    seed: Optional[int] = None
    ratios: tuple[float, float, float] = DEFAULT_RATIOS

    def split(self, name: str) -> list[SummExample]:
        return getattr(self, name)

    def all_examples(self) -> list[SummExample]:
        return self.train + self.val + self.test

    def leaked_ids(self) -> set[str]:
        train_ids = {e.cited_paper_id for e in self.train}
        return train_ids & {e.cited_paper_id for e in self.val + self.test}


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5 + 1e-9)


def assign_splits(
    examples: Sequence[SummExample],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> DatasetBundle:
    """Split by cited paper so no evaluation paper appears in training.

    Sorted cited-paper ids are shuffled with ``random.Random(seed)``. Whole
    groups then fill test until it holds ``round(ratio * N)`` examples, then
    val likewise; the rest is train. The last remaining group always goes to
    train, so a single-group input is all train. Examples keep input order
    within each split.
    """
    if not examples:
        raise EmptyInput("no examples to split")
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must be three positive numbers summing to 1, got {ratios}")

    groups: dict[str, int] = Counter(e.cited_paper_id for e in examples)
    keys = sorted(groups)
    random.Random(seed).shuffle(keys)

    n = len(examples)
    assignment = {}
    pos = 0
    for split_name, ratio in (("test", ratios[2]), ("val", ratios[1])):
        target = _round_half_up(ratio * n)
        filled = 0
        while filled < target and pos < len(keys) - 1:
            assignment[keys[pos]] = split_name
            filled += groups[keys[pos]]
            pos += 1
    for k in keys[pos:]:
        assignment[k] = "train"

    bundle = DatasetBundle(seed=seed, ratios=ratios)
    for e in examples:
        bundle.split(assignment[e.cited_paper_id]).append(e)
    return bundle


def write_examples(examples: Iterable[SummExample], path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in examples:
            fh.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
            n += 1
    return n


def read_examples(path) -> list[SummExample]:
    out = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{i}: "
            try:
                d = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaViolation(f"{where}invalid JSON: {e.msg}") from None
            if not isinstance(d, dict):
                raise SchemaViolation(f"{where}record must be an object")
            ex = SummExample.from_dict(d, where)
            if ex.example_id in seen:
                raise SchemaViolation(f"{where}duplicate example_id {ex.example_id!r}")
            seen.add(ex.example_id)
            out.append(ex)
    return out


def write_dataset(bundle: DatasetBundle, path) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for name in SPLITS:
        write_examples(bundle.split(name), path / f"{name}.jsonl")
    meta = {"seed": bundle.seed, "ratios": list(bundle.ratios)}
    (path / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def read_dataset(path) -> DatasetBundle:
    """Load and validate a dataset directory written by :func:`write_dataset`."""
    path = Path(path)
    meta_path = path / "meta.json"
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    bundle = DatasetBundle(seed=meta.get("seed"), ratios=tuple(meta.get("ratios", DEFAULT_RATIOS)))
    seen = set()
    for name in SPLITS:
        split_path = path / f"{name}.jsonl"
        if not split_path.exists():
            raise SchemaViolation(f"missing split file {split_path}")
        for ex in read_examples(split_path):
            if ex.example_id in seen:
                raise SchemaViolation(f"example_id {ex.example_id!r} appears in more than one split")
            seen.add(ex.example_id)
            bundle.split(name).append(ex)
    leaked = bundle.leaked_ids()
    if leaked:
        raise SchemaViolation(f"{len(leaked)} cited papers appear in both train and evaluation splits")
    return bundle


# --- TF-IDF overlap -------------------------------------------------------


@dataclass(frozen=True)
class IdfTable:
    n_docs: int
    df: Mapping[str, int]

    def weight(self, term: str) -> float:
        # unseen terms are weighted as if they occurred in one document
        return math.log(self.n_docs / self.df.get(term, 1)) + 1.0


def build_idf(docs: Iterable[str]) -> IdfTable:
    df = Counter()
    n = 0
    for d in docs:
        df.update(set(tokenize(d)))
        n += 1
    return IdfTable(max(n, 1), dict(df))


def tfidf_vector(doc: str, idf: IdfTable) -> dict[str, float]:
    return {t: c * idf.weight(t) for t, c in Counter(tokenize(doc)).items()}


def tfidf_cosine(doc_a: str, doc_b: str, idf: IdfTable) -> float:
    va, vb = tfidf_vector(doc_a, idf), tfidf_vector(doc_b, idf)
    na = math.sqrt(sum(w * w for w in va.values()))
    nb = math.sqrt(sum(w * w for w in vb.values()))
    if na == 0 or nb == 0:
        return 0.0
    dot = sum(w * vb[t] for t, w in va.items() if t in vb)
    return min(1.0, max(0.0, dot / (na * nb)))


@dataclass(frozen=True)
class OverlapRow:
    doc_id: str
    best_match_id: str
    similarity: float
    flagged: bool


@dataclass
class OverlapReport:
    rows: list[OverlapRow]
    threshold: float

    @property
    def flagged_fraction(self) -> float:
        return sum(r.flagged for r in self.rows) / len(self.rows) if self.rows else 0.0

    @property
    def matched_pairs(self) -> list[tuple[str, str]]:
        return [(r.doc_id, r.best_match_id) for r in self.rows if r.flagged]

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["doc_id", "best_match_id", "similarity", "flagged"])
            for r in self.rows:
                w.writerow([r.doc_id, r.best_match_id, f"{r.similarity:.6f}", int(r.flagged)])


def _as_items(docs) -> list[tuple[str, str]]:
    if isinstance(docs, Mapping):
        return list(docs.items())
    return [(str(i), d) if isinstance(d, str) else tuple(d) for i, d in enumerate(docs)]


def _tfidf_matrix(token_lists, vocab, idf_weights) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    for i, toks in enumerate(token_lists):
        for t, c in Counter(toks).items():
            rows.append(i)
            cols.append(vocab[t])
            vals.append(c * idf_weights[vocab[t]])
    m = sp.csr_matrix((vals, (rows, cols)), shape=(len(token_lists), len(vocab)), dtype=np.float64)
    norms = np.sqrt(np.asarray(m.multiply(m).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    return sp.diags(1.0 / norms) @ m


def detect_overlap(dataset_a_docs, dataset_b_docs, threshold: float = 0.9, chunk: int = 256) -> OverlapReport:
    """For each document of B, find its most similar document in A.

    Documents are ``{id: text}`` mappings or sequences of texts / ``(id, text)``
    pairs. IDF is fitted on A and B together. A document is flagged when its
    best cosine similarity is strictly greater than ``threshold``; ties go to
    the earliest document of A.
    """
    a_items, b_items = _as_items(dataset_a_docs), _as_items(dataset_b_docs)
    if not a_items or not b_items:
        raise EmptyInput("both document sets must be non-empty")
    a_toks = [tokenize(t) for _, t in a_items]
    b_toks = [tokenize(t) for _, t in b_items]

    df = Counter()
    for toks in a_toks + b_toks:
        df.update(set(toks))
    vocab = {t: i for i, t in enumerate(sorted(df))}
    n_docs = len(a_toks) + len(b_toks)
    idf_weights = np.array([math.log(n_docs / df[t]) + 1.0 for t in sorted(df)])

    A = _tfidf_matrix(a_toks, vocab, idf_weights).T.tocsc()
    B = _tfidf_matrix(b_toks, vocab, idf_weights)

    rows = []
    for lo in range(0, len(b_items), chunk):
        sims = (B[lo : lo + chunk] @ A).toarray()
        best = sims.argmax(axis=1)
        for k, j in enumerate(best):
            sim = float(min(1.0, max(0.0, sims[k, j])))
            doc_id = b_items[lo + k][0]
            match_id = a_items[j][0] if sim > 0 else ""
            rows.append(OverlapRow(doc_id, match_id, sim, sim > threshold))
    return OverlapReport(rows, threshold)
