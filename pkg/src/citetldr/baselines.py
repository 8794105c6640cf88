"""Extractive one-sentence baselines over a paper abstract."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from .errors import EmptyAbstract, EmptyReference
from .extraction import split_sentences
from .rouge import score_pair

Selector = Literal["lead", "heuristic", "oracle"]
CUES = ("propose", "introduce", "in this paper")


@dataclass(frozen=True)
class ExtractiveChoice:
    sentence_index: int
    sentence_text: str
    selector: Selector
    oracle_score: Optional[float] = None


def abstract_sentences(abstract: str) -> list[str]:
    sents = [s for s, _, _ in split_sentences(abstract)]
    if not sents:
        raise EmptyAbstract("abstract is empty")
    return sents


def ext_lead(abstract: str) -> ExtractiveChoice:
    sents = abstract_sentences(abstract)
    return ExtractiveChoice(0, sents[0], "lead")


def ext_heuristic(abstract: str) -> ExtractiveChoice:
    """First sentence mentioning a contribution cue, else the lead sentence."""
    sents = abstract_sentences(abstract)
    for i, s in enumerate(sents):
        low = s.lower()
        if any(cue in low for cue in CUES):
            return ExtractiveChoice(i, s, "heuristic")
    return ExtractiveChoice(0, sents[0], "heuristic")


def ext_oracle(abstract: str, reference: str, stem: bool = False) -> ExtractiveChoice:
    """Sentence with the highest ROUGE-2 F1 against ``reference``; earliest wins ties."""
    if not reference.strip():
        raise EmptyReference("reference summary is empty")
    sents = abstract_sentences(abstract)
    best_i, best_f = 0, -1.0
    for i, s in enumerate(sents):
        f = score_pair(s, reference, stem=stem).r2.f1
        if f > best_f:
            best_i, best_f = i, f
    return ExtractiveChoice(best_i, sents[best_i], "oracle", best_f)


def run_baseline(selector: Selector, abstract: str, reference: Optional[str] = None, stem: bool = False) -> ExtractiveChoice:
    if selector == "lead":
        return ext_lead(abstract)
    if selector == "heuristic":
        return ext_heuristic(abstract)
    if selector == "oracle":
        return ext_oracle(abstract, reference or "", stem=stem)
    raise ValueError(f"unknown baseline {selector!r}")
