"""End-to-end dataset construction from a full-text corpus."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional

from .analysis import compute_stats, top_discipline, write_stats
from .config import PipelineConfig
from .corpus import iter_lines, iter_records, is_eligible, parse_record
from .dataset import DatasetBundle, SummExample, assign_splits, write_dataset, write_examples
from .errors import EmptyInput, SchemaViolation
from .extraction import CitationSentence, extract_with_counts, locate_related_work
from .filtering import FunnelStats, run_filter

log = logging.getLogger(__name__)

BATCH_LINES = 2048


@dataclass(frozen=True)
class CitedInfo:
    abstract: str
    title: Optional[str]
    discipline: Optional[str]


class StageError(Exception):
    """Wraps a failure with the pipeline stage it happened in."""

    def __init__(self, stage: str, error: Exception):
        self.stage = stage
        self.error = error
        super().__init__(f"[{stage}] {error}")


def build_lookup(paths) -> tuple[dict[str, CitedInfo], int]:
    """First pass: everything needed about a paper when it is the cited side."""
    lookup = {}
    n = 0
    for rec in iter_records(paths):
        n += 1
        if rec.abstract.strip():
            lookup[rec.paper_id] = CitedInfo(rec.abstract, rec.title or None, top_discipline(rec))
    return lookup, n


class AbstractView(Mapping):
    """Read-only ``paper_id -> abstract`` view over a lookup."""

    def __init__(self, lookup: Mapping[str, CitedInfo]):
        self._lookup = lookup

    def __getitem__(self, key):
        return self._lookup[key].abstract

    def __iter__(self):
        return iter(self._lookup)

    def __len__(self):
        return len(self._lookup)


def process_record(line: str, line_no: int, lookup: Mapping[str, CitedInfo], cfg: PipelineConfig):
    """Parse, extract and filter one paper. Pure; safe to run in any worker.

    Returns ``(candidates, kept_flags, stats)`` with one flag per candidate.
    """
    rec = parse_record(line, line_no)
    stats = FunnelStats(input_papers=1)
    if not is_eligible(rec):
        return [], [], stats
    stats.eligible_papers = 1
    if not locate_related_work(rec, cfg.heading_patterns):
        return [], [], stats
    stats.related_work_papers = 1
    abstracts = AbstractView(lookup)
    cands, counts = extract_with_counts(rec, abstracts, cfg.heading_patterns, cfg.min_sentence_tokens)
    stats.add_counts(counts)
    kept, _ = run_filter(cands, abstracts, cfg.thresholds, cfg.stem, stats)
    kept_keys = {c.candidate_id for c in kept}
    return cands, [c.candidate_id in kept_keys for c in cands], stats


_worker_state: dict = {}


def _init_worker(lookup, cfg):
    _worker_state["lookup"] = lookup
    _worker_state["cfg"] = cfg


def _work(item):
    line_no, line = item
    return process_record(line, line_no, _worker_state["lookup"], _worker_state["cfg"])


def _batches(it: Iterable, size: int) -> Iterator[list]:
    it = iter(it)
    while batch := list(islice(it, size)):
        yield batch


def iter_processed(cfg: PipelineConfig, lookup: Mapping[str, CitedInfo]):
    """Second pass over the corpus, yielding per-paper results in input order."""
    lines = iter_lines(cfg.inputs)
    if cfg.workers == 1:
        for line_no, line in lines:
            yield process_record(line, line_no, lookup, cfg)
        return
    with ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(lookup, cfg)) as pool:
        # bounded: at most one batch of lines is in flight at a time
        for batch in _batches(lines, BATCH_LINES):
            yield from pool.map(_work, batch, chunksize=64)


def to_example(c: CitationSentence, info: CitedInfo) -> SummExample:
    return SummExample(
        example_id=c.candidate_id,
        src=info.abstract,
        tgt=c.normalized_text,
        cited_paper_id=c.cited_paper_id,
        citing_paper_id=c.citing_paper_id,
        title=info.title,
        discipline=info.discipline,
    )


def _candidate_row(c: CitationSentence, info: CitedInfo) -> dict:
    row = c.to_dict()
    row["src"] = info.abstract
    row["title"] = info.title
    row["discipline"] = info.discipline
    return row


def write_funnel(stats: FunnelStats, path) -> None:
    Path(path).write_text(json.dumps(stats.to_dict(), indent=2) + "\n", encoding="utf-8")


def run_pipeline(cfg: PipelineConfig) -> tuple[FunnelStats, DatasetBundle]:
    """Build the dataset described by ``cfg`` and write all artifacts.

    Output directory layout: ``config.txt``, ``candidates.jsonl``,
    ``examples.jsonl``, ``funnel.json``, ``dataset/{train,val,test}.jsonl``
    and ``stats/*.csv``. Identical configs give byte-identical outputs.
    """
    cfg.validate()
    out = Path(cfg.output_dir)

    try:
        lookup, n_papers = build_lookup(cfg.inputs)
    except Exception as e:
        raise StageError("corpus-io", e) from e
    if n_papers == 0:
        raise StageError("corpus-io", EmptyInput("input contains no records"))
    log.info("indexed %d papers (%d with abstracts)", n_papers, len(lookup))

    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.to_text(), encoding="utf-8")

    stats = FunnelStats()
    examples = []
    try:
        with open(out / "candidates.jsonl", "w", encoding="utf-8", newline="\n") as cand_fh:
            for cands, flags, part in iter_processed(cfg, lookup):
                stats = stats + part
                for c, keep in zip(cands, flags):
                    info = lookup[c.cited_paper_id]
                    cand_fh.write(json.dumps(_candidate_row(c, info), ensure_ascii=False) + "\n")
                    if keep:
                        examples.append(to_example(c, info))
    except Exception as e:
        raise StageError("extraction", e) from e

    bad = stats.conservation_errors()
    if bad:
        raise StageError("quality-filter", RuntimeError(f"funnel does not balance: {bad}"))
    write_funnel(stats, out / "funnel.json")
    write_examples(examples, out / "examples.jsonl")
    log.info("kept %d of %d candidates", stats.post_filter_examples, stats.candidates)

    if not examples:
        raise StageError("dataset-builder", EmptyInput("no examples survived filtering"))
    bundle = assign_splits(examples, cfg.ratios, cfg.seed)
    write_dataset(bundle, out / "dataset")
    write_stats(compute_stats(bundle), out / "stats")
    return stats, bundle


def read_candidates(path) -> tuple[list[CitationSentence], dict[str, CitedInfo]]:
    """Load a ``candidates.jsonl`` written by :func:`run_pipeline`."""
    names = CitationSentence.__dataclass_fields__.keys()
    cands, lookup = [], {}
    for line_no, line in iter_lines(path):
        try:
            row = json.loads(line)
            cands.append(CitationSentence(**{k: row[k] for k in names}))
            lookup[row["cited_paper_id"]] = CitedInfo(row["src"], row.get("title"), row.get("discipline"))
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise SchemaViolation(f"{path}:{line_no}: bad candidate row ({e})") from None
    return cands, lookup


def refilter(candidates_path, cfg: PipelineConfig) -> tuple[list[SummExample], FunnelStats]:
    cands, lookup = read_candidates(candidates_path)
    kept, stats = run_filter(cands, AbstractView(lookup), cfg.thresholds, cfg.stem)
    return [to_example(c, lookup[c.cited_paper_id]) for c in kept], stats
