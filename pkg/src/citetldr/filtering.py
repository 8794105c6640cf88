"""Recall-threshold filtering of citation sentences against cited abstracts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Iterable, Mapping, Optional

from .errors import EmptyAbstract
from .extraction import CitationSentence
from .rouge import RougeScore, score_pair


@dataclass(frozen=True)
class FilterThresholds:
    r1_recall_min: float = 0.50
    r2_recall_min: float = 0.20
    rl_recall_min: float = 0.40

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{f.name} must be in [0, 1], got {v}")

    def __le__(self, other: "FilterThresholds") -> bool:
        return all(getattr(self, f.name) <= getattr(other, f.name) for f in fields(self))


@dataclass
class FunnelStats:
    """Stage counters for the whole pipeline.

    Paper level: ``input_papers >= eligible_papers >= related_work_papers``.
    Sentence level (each line partitions the left-hand side)::

        related_work_sentences = zero_citation_dropped + multi_citation_dropped
                                 + single_citation_sentences
        single_citation_sentences = unlinked_dropped + ref_token_dropped
                                    + short_dropped + candidates
        candidates = missing_abstract_dropped + threshold_dropped
                     + post_filter_examples

    Recall sums cover the kept examples only. Merging is plain addition, so
    partial stats from workers can be combined in any order.
    """

    input_papers: int = 0
    eligible_papers: int = 0
    related_work_papers: int = 0
    related_work_sentences: int = 0
    zero_citation_dropped: int = 0
    multi_citation_dropped: int = 0
    single_citation_sentences: int = 0
    unlinked_dropped: int = 0
    ref_token_dropped: int = 0
    short_dropped: int = 0
    candidates: int = 0
    missing_abstract_dropped: int = 0
    threshold_dropped: int = 0
    post_filter_examples: int = 0
    r1_recall_sum: float = 0.0
    r2_recall_sum: float = 0.0
    rl_recall_sum: float = 0.0

    def __add__(self, other: "FunnelStats") -> "FunnelStats":
        return FunnelStats(**{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)})

    def add_counts(self, counts: Mapping[str, int]) -> None:
        for key, value in counts.items():
            setattr(self, key, getattr(self, key) + value)

    def _mean(self, total: float) -> float:
        return total / self.post_filter_examples if self.post_filter_examples else 0.0

    @property
    def mean_r1_recall(self) -> float:
        return self._mean(self.r1_recall_sum)

    @property
    def mean_r2_recall(self) -> float:
        return self._mean(self.r2_recall_sum)

    @property
    def mean_rl_recall(self) -> float:
        return self._mean(self.rl_recall_sum)

    @property
    def retention(self) -> float:
        return self.post_filter_examples / self.single_citation_sentences if self.single_citation_sentences else 0.0

    def conservation_errors(self) -> list[str]:
        """Names of violated partition identities; empty when the funnel balances."""
        errors = []
        if self.related_work_sentences != (
            self.zero_citation_dropped + self.multi_citation_dropped + self.single_citation_sentences
        ):
            errors.append("related_work_sentences")
        if self.single_citation_sentences != (
            self.unlinked_dropped + self.ref_token_dropped + self.short_dropped + self.candidates
        ):
            errors.append("single_citation_sentences")
        if self.candidates != self.missing_abstract_dropped + self.threshold_dropped + self.post_filter_examples:
            errors.append("candidates")
        return errors

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mean_r1_recall"] = self.mean_r1_recall
        d["mean_r2_recall"] = self.mean_r2_recall
        d["mean_rl_recall"] = self.mean_rl_recall
        d["retention"] = self.retention
        return d


def passes(
    candidate: CitationSentence, abstract: str, t: FilterThresholds, stem: bool = False
) -> tuple[bool, RougeScore]:
    """Score the abstract against the citation sentence; all three recalls must clear ``t``.

    Recall is taken over the citation sentence's n-grams, i.e. how much of the
    would-be summary is covered by the abstract.
    """
    if not abstract.strip():
        raise EmptyAbstract(f"no abstract for cited paper {candidate.cited_paper_id!r}")
    score = score_pair(abstract, candidate.normalized_text, stem=stem)
    ok = (
        score.r1.recall >= t.r1_recall_min
        and score.r2.recall >= t.r2_recall_min
        and score.rl.recall >= t.rl_recall_min
    )
    return ok, score


def run_filter(
    candidates: Iterable[CitationSentence],
    abstracts: Mapping[str, str],
    t: FilterThresholds = FilterThresholds(),
    stem: bool = False,
    stats: Optional[FunnelStats] = None,
) -> tuple[list[CitationSentence], FunnelStats]:
    stats = stats if stats is not None else FunnelStats()
    kept = []
    for c in candidates:
        stats.candidates += 1
        abstract = abstracts.get(c.cited_paper_id, "")
        if not abstract.strip():
            stats.missing_abstract_dropped += 1
            continue
        ok, score = passes(c, abstract, t, stem)
        if not ok:
            stats.threshold_dropped += 1
            continue
        stats.post_filter_examples += 1
        stats.r1_recall_sum += score.r1.recall
        stats.r2_recall_sum += score.r2.recall
        stats.rl_recall_sum += score.rl.recall
        kept.append(c)
    return kept, stats
