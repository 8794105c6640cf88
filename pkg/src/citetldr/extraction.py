"""Pull single-citation sentences out of Related Work sections.

A sentence becomes a candidate summary of the paper it cites when it sits in
a Related Work paragraph, carries exactly one citation span, and that span
links to a paper whose abstract we have. The span is replaced by ``REF``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Literal, Mapping, Sequence

from .corpus import Paragraph, PaperRecord
from .errors import SpanOutOfBounds

REF = "REF"
REF_RE = re.compile(r"\bREF\b")

DEFAULT_HEADING_PATTERNS = ("related work",)
DEFAULT_MIN_TOKENS = 5

ABBREVIATIONS = frozenset(
    ["al.", "e.g.", "i.e.", "etc.", "fig.", "eq.", "cf.", "vs.", "dr.", "prof.", "no."]
)

_NUMBERING_RE = re.compile(r"^\s*(?:\d+(?:\.\d+)*|[ivxlc]+)\.?\s+", re.IGNORECASE)
_WS_RE = re.compile(r"\s+")
# terminator, optional closing quotes/parens, optional glued numeric markers ("end.[3]")
_TERM_RE = re.compile(r"[.!?]+[\"'”’)]*(?:\[[\d,;\s\-–]+\])*")


@dataclass(frozen=True)
class CitationSentence:
    citing_paper_id: str
    cited_paper_id: str
    raw_text: str
    normalized_text: str
    section_heading: str
    paragraph_index: int
    sentence_index: int
    span_start: int
    span_end: int

    @property
    def candidate_id(self) -> str:
        return f"{self.citing_paper_id}_{self.paragraph_index}_{self.sentence_index}"

    def to_dict(self) -> dict:
        return asdict(self)


def normalize_heading(heading: str) -> str:
    return _WS_RE.sub(" ", _NUMBERING_RE.sub("", heading)).strip().lower()


def is_related_work(heading: str, patterns: Sequence[str] = DEFAULT_HEADING_PATTERNS) -> bool:
    h = normalize_heading(heading)
    return any(pat.lower() in h for pat in patterns)


def locate_related_work(
    p: PaperRecord, patterns: Sequence[str] = DEFAULT_HEADING_PATTERNS
) -> list[Paragraph]:
    return [par for par in p.body if is_related_work(par.section_heading, patterns)]


def _is_abbreviation(text: str, term_pos: int) -> bool:
    token = text[: term_pos + 1].rsplit(None, 1)[-1].lstrip("([\"'").lower()
    return token in ABBREVIATIONS


def split_sentences(text: str, protected: Sequence[tuple[int, int]] = ()) -> list[tuple[str, int, int]]:
    """Rule-based sentence splitter returning ``(sentence, start, end)`` triples.

    A boundary is placed after ``.``, ``!`` or ``?`` (plus any closing quote or
    glued numeric marker such as ``[3]``) when whitespace follows and the next
    sentence starts with an uppercase letter or ``[``. Known abbreviations
    ("et al.", "e.g.", ...) never end a sentence, and no boundary is placed
    strictly inside a ``protected`` character range.
    """
    cuts = [0]
    for m in _TERM_RE.finditer(text):
        end = m.end()
        if end >= len(text) or not text[end].isspace():
            continue
        rest = text[end:].lstrip()
        if not rest or not (rest[0] == "[" or rest[0].isupper()):
            continue
        if m.group()[0] == "." and _is_abbreviation(text, m.start()):
            continue
        if any(s < end < e for s, e in protected):
            continue
        cuts.append(end)
    cuts.append(len(text))

    out = []
    for a, b in zip(cuts, cuts[1:]):
        chunk = text[a:b]
        stripped = chunk.strip()
        if not stripped:
            continue
        start = a + (len(chunk) - len(chunk.lstrip()))
        out.append((stripped, start, start + len(stripped)))
    return out


def segment_sentences(par: Paragraph) -> list[tuple[str, int, int]]:
    return split_sentences(par.text, [(s.start, s.end) for s in par.cite_spans])


def collapse_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def normalize_citation(sentence: str, start: int, end: int) -> str:
    """Replace ``sentence[start:end]`` with ``REF`` and collapse whitespace."""
    if not 0 <= start <= end <= len(sentence):
        raise SpanOutOfBounds(f"span [{start}, {end}) outside sentence of length {len(sentence)}")
    return collapse_ws(sentence[:start] + REF + sentence[end:])


def extract_with_counts(
    p: PaperRecord,
    abstracts: Mapping[str, str],
    patterns: Sequence[str] = DEFAULT_HEADING_PATTERNS,
    min_tokens: int = DEFAULT_MIN_TOKENS,
) -> tuple[list[CitationSentence], Counter]:
    """Candidates from one paper plus per-reason sentence counts.

    Counter keys: ``related_work_sentences`` splits into
    ``zero_citation_dropped + multi_citation_dropped + single_citation_sentences``;
    the last splits into ``unlinked_dropped + ref_token_dropped + short_dropped``
    plus the number of candidates returned.
    """
    counts = Counter()
    out = []
    for pi, par in enumerate(p.body):
        if not is_related_work(par.section_heading, patterns):
            continue
        for si, (sent, s_start, s_end) in enumerate(segment_sentences(par)):
            counts["related_work_sentences"] += 1
            spans = [c for c in par.cite_spans if s_start <= c.start < s_end]
            if not spans:
                counts["zero_citation_dropped"] += 1
                continue
            if len(spans) > 1:
                counts["multi_citation_dropped"] += 1
                continue
            counts["single_citation_sentences"] += 1
            span = spans[0]
            cited = p.bib_entries.get(span.bib_key)
            if not cited or not abstracts.get(cited, "").strip():
                counts["unlinked_dropped"] += 1
                continue
            normalized = normalize_citation(sent, span.start - s_start, span.end - s_start)
            if len(REF_RE.findall(normalized)) != 1:
                counts["ref_token_dropped"] += 1
                continue
            if len(normalized.split()) < min_tokens:
                counts["short_dropped"] += 1
                continue
            out.append(
                CitationSentence(
                    citing_paper_id=p.paper_id,
                    cited_paper_id=cited,
                    raw_text=sent,
                    normalized_text=normalized,
                    section_heading=par.section_heading,
                    paragraph_index=pi,
                    sentence_index=si,
                    span_start=span.start - s_start,
                    span_end=span.end - s_start,
                )
            )
    return out, counts


def extract_candidates(
    p: PaperRecord,
    abstracts: Mapping[str, str],
    patterns: Sequence[str] = DEFAULT_HEADING_PATTERNS,
    min_tokens: int = DEFAULT_MIN_TOKENS,
) -> list[CitationSentence]:
    return extract_with_counts(p, abstracts, patterns, min_tokens)[0]


StyleMode = Literal["zero_shot_post", "few_shot_train"]

_LEADING_REF_RE = re.compile(r"^REF\b")
_LEADING_WE_RE = re.compile(r"^\s*We\b(?!')")


def adapt_style(summary: str, mode: StyleMode) -> str:
    """Bridge the citation-sentence and first-person summary styles.

    ``zero_shot_post`` turns a leading REF into "This paper" and deletes every
    other REF; ``few_shot_train`` rewrites a leading "We" to "This paper REF".
    """
    if mode == "zero_shot_post":
        s = summary.strip()
        s = _LEADING_REF_RE.sub("This paper", s)
        return collapse_ws(REF_RE.sub("", s))
    if mode == "few_shot_train":
        return _LEADING_WE_RE.sub("This paper REF", summary, count=1)
    raise ValueError(f"unknown style mode {mode!r}")
