"""ROUGE-1, ROUGE-2 and ROUGE-L on short texts.

Scores are sentence level: clipped n-gram counts for ROUGE-N and a single
longest common subsequence for ROUGE-L. No stopword removal. Porter stemming
is available behind ``stem=True`` (needs nltk) and is off by default.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

_TOKEN_RE = re.compile(r"[^\W_]+")


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float


ZERO = PRF(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class RougeScore:
    r1: PRF
    r2: PRF
    rl: PRF

    def as_dict(self) -> dict:
        out = {}
        for name in ("r1", "r2", "rl"):
            prf = getattr(self, name)
            out[f"{name}_p"] = prf.precision
            out[f"{name}_r"] = prf.recall
            out[f"{name}_f"] = prf.f1
        return out


@lru_cache(maxsize=1)
def _porter():
    from nltk.stem.porter import PorterStemmer

    return PorterStemmer()


@lru_cache(maxsize=100_000)
def _stem(token: str) -> str:
    return _porter().stem(token)


def tokenize(text: str, stem: bool = False) -> list[str]:
    """Lowercased runs of alphanumeric characters; everything else separates."""
    tokens = _TOKEN_RE.findall(text.lower())
    if stem:
        tokens = [_stem(t) for t in tokens]
    return tokens


def prf(match: int, n_cand: int, n_ref: int) -> PRF:
    p = match / n_cand if n_cand else 0.0
    r = match / n_ref if n_ref else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return PRF(p, r, f)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> PRF:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand = ngrams(candidate, n)
    ref = ngrams(reference, n)
    match = sum((cand & ref).values())
    return prf(match, sum(cand.values()), sum(ref.values()))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            if x == y:
                cur.append(prev[j] + 1)
            else:
                cur.append(max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> PRF:
    return prf(lcs_length(candidate, reference), len(candidate), len(reference))


def score_tokens(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    return RougeScore(
        r1=rouge_n(candidate, reference, 1),
        r2=rouge_n(candidate, reference, 2),
        rl=rouge_l(candidate, reference),
    )


def score_pair(candidate: str, reference: str, stem: bool = False) -> RougeScore:
    """Score ``candidate`` against ``reference``; recall is over the reference."""
    return score_tokens(tokenize(candidate, stem), tokenize(reference, stem))
