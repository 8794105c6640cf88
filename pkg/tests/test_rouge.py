from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citetldr.rouge import lcs_length, rouge_l, rouge_n, score_pair, tokenize

from .oracles import brute_lcs, brute_rouge_l, brute_rouge_n

tokens = st.lists(st.sampled_from(list("abcde")), max_size=8)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("The Domain-Transfer Network (DTN)", ["the", "domain", "transfer", "network", "dtn"]),
        ("", []),
        ("ROUGE-1/2/L", ["rouge", "1", "2", "l"]),
        ("snake_case words", ["snake", "case", "words"]),
    ],
)
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def test_tokenize_stemming_is_opt_in():
    pytest.importorskip("nltk")
    assert tokenize("proposes methods") == ["proposes", "methods"]
    assert tokenize("proposes methods", stem=True) == ["propos", "method"]


def test_cat_example():
    cand, ref = tokenize("the cat ran"), tokenize("the cat sat")
    p, r, _ = rouge_n(cand, ref, 1)
    assert (p, r) == (pytest.approx(2 / 3), pytest.approx(2 / 3))
    assert rouge_n(cand, ref, 2).recall == 0.5
    assert lcs_length(cand, ref) == 2
    assert rouge_l(cand, ref).recall == pytest.approx(2 / 3)


def test_identity_and_disjoint():
    t = tokenize("a graph parser for trees")
    for n in (1, 2):
        assert rouge_n(t, t, n) == (1.0, 1.0, 1.0)
    assert rouge_l(t, t) == (1.0, 1.0, 1.0)
    assert rouge_l(t, ["x", "y"]) == (0.0, 0.0, 0.0)


def test_clipped_counts():
    # candidate repeats "the" three times but the reference has it once
    p, r, _ = rouge_n(["the", "the", "the"], ["the", "cat"], 1)
    assert p == pytest.approx(1 / 3) and r == 0.5


def test_score_pair_examples():
    s = score_pair("the cat ran", "the cat sat")
    assert Fraction(s.r1.recall).limit_denominator(100) == Fraction(2, 3)
    assert s.r2.recall == 0.5
    assert Fraction(s.rl.recall).limit_denominator(100) == Fraction(2, 3)
    zero = score_pair("", "the cat")
    assert all(v == 0.0 for v in zero.as_dict().values())
    one = score_pair("x", "x")
    assert one.r1 == (1.0, 1.0, 1.0) and one.rl == (1.0, 1.0, 1.0)
    # a single token has no bigrams; zero denominators score 0
    assert one.r2 == (0.0, 0.0, 0.0)
    assert score_pair("x y", "x y").r2 == (1.0, 1.0, 1.0)


def test_rouge_n_rejects_n0():
    with pytest.raises(ValueError):
        rouge_n(["a"], ["a"], 0)


@given(tokens, tokens)
def test_matches_brute_force(a, b):
    for n in (1, 2):
        assert tuple(rouge_n(a, b, n)) == pytest.approx(brute_rouge_n(a, b, n))
    assert lcs_length(a, b) == brute_lcs(a if len(a) <= len(b) else b, b if len(a) <= len(b) else a)
    assert tuple(rouge_l(a, b)) == pytest.approx(brute_rouge_l(a, b))


@given(tokens, tokens)
def test_swap_symmetry(a, b):
    for n in (1, 2):
        p, r, f = rouge_n(a, b, n)
        p2, r2, f2 = rouge_n(b, a, n)
        assert (p, r, f) == (r2, p2, f2)
    p, r, f = rouge_l(a, b)
    assert (p, r) == (rouge_l(b, a).recall, rouge_l(b, a).precision)


@settings(max_examples=300)
@given(st.lists(st.text(max_size=6), max_size=12), st.lists(st.text(max_size=6), max_size=12))
def test_bounds_and_lcs_le_unigram(a, b):
    s = score_pair(" ".join(a), " ".join(b))
    assert all(0.0 <= v <= 1.0 for v in s.as_dict().values())
    assert s.rl.recall <= s.r1.recall + 1e-12
