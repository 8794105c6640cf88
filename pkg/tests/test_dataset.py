import json
import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citetldr.dataset import (
    DatasetBundle,
    SummExample,
    assign_splits,
    build_idf,
    detect_overlap,
    read_dataset,
    tfidf_cosine,
    write_dataset,
)
from citetldr.errors import EmptyInput, SchemaViolation

from .conftest import make_examples
from .oracles import cosine_dense, greedy_split_reference


def ex(i, cited, tgt=None):
    return SummExample(f"e{i}", f"abstract {cited}", tgt or f"REF did thing {i}", cited, "P", "Title", "CS")


def test_single_group_goes_to_train():
    b = assign_splits([ex(i, "C1") for i in range(10)], seed=3)
    assert len(b.train) == 10 and b.val == [] and b.test == []


def test_twenty_singletons():
    b = assign_splits([ex(i, f"C{i:02d}") for i in range(20)], (0.9, 0.05, 0.05), seed=7)
    assert (len(b.train), len(b.val), len(b.test)) == (18, 1, 1)
    expected = greedy_split_reference([f"C{i:02d}" for i in range(20)], (0.9, 0.05, 0.05), 7)
    assert b.test[0].cited_paper_id == next(k for k, v in expected.items() if v == "test")
    assert b.val[0].cited_paper_id == next(k for k, v in expected.items() if v == "val")


def test_split_errors():
    with pytest.raises(EmptyInput):
        assign_splits([], seed=0)
    with pytest.raises(ValueError):
        assign_splits([ex(0, "C")], (0.5, 0.3, 0.3))
    with pytest.raises(ValueError):
        assign_splits([ex(0, "C")], (1.0, 0.0, 0.0))


@settings(max_examples=60)
@given(st.integers(1, 40), st.integers(0, 2**32), st.sampled_from([(0.9, 0.05, 0.05), (0.6, 0.2, 0.2), (0.5, 0.25, 0.25)]))
def test_split_properties(n_groups, seed, ratios):
    examples = make_examples(random.Random(seed), n_groups)
    b = assign_splits(examples, ratios, seed)
    assert b.leaked_ids() == set()
    assert Counter(b.all_examples()) == Counter(examples)
    assert b.train, "train is never empty"
    ref = greedy_split_reference([e.cited_paper_id for e in examples], ratios, seed)
    for name in ("train", "val", "test"):
        assert all(ref[e.cited_paper_id] == name for e in b.split(name))
    again = assign_splits(list(examples), ratios, seed)
    assert (again.train, again.val, again.test) == (b.train, b.val, b.test)


def test_round_trip(tmp_path):
    examples = [ex(i, f"C{i % 5}") for i in range(25)]
    b = assign_splits(examples, (0.6, 0.2, 0.2), seed=1)
    write_dataset(b, tmp_path / "d")
    back = read_dataset(tmp_path / "d")
    assert (back.train, back.val, back.test, back.seed, back.ratios) == (b.train, b.val, b.test, 1, (0.6, 0.2, 0.2))
    first = {p.name: p.read_bytes() for p in (tmp_path / "d").iterdir()}
    write_dataset(assign_splits(examples, (0.6, 0.2, 0.2), seed=1), tmp_path / "d")
    assert first == {p.name: p.read_bytes() for p in (tmp_path / "d").iterdir()}


def test_read_rejects_bad_files(tmp_path):
    b = DatasetBundle(train=[ex(0, "A"), ex(1, "B")], val=[ex(2, "C")], test=[ex(3, "D")])
    write_dataset(b, tmp_path)
    train = tmp_path / "train.jsonl"
    lines = train.read_text().splitlines()
    train.write_text("\n".join(lines + [lines[0]]) + "\n")
    with pytest.raises(SchemaViolation, match="duplicate"):
        read_dataset(tmp_path)

    write_dataset(DatasetBundle(train=[ex(0, "A")], val=[ex(1, "A")], test=[ex(2, "B")]), tmp_path)
    with pytest.raises(SchemaViolation, match="both train"):
        read_dataset(tmp_path)

    bad = dict(ex(5, "Z").to_dict(), tgt="no placeholder here")
    (tmp_path / "val.jsonl").write_text(json.dumps(bad) + "\n")
    with pytest.raises(SchemaViolation, match="REF"):
        read_dataset(tmp_path)

    (tmp_path / "val.jsonl").write_text("")
    (tmp_path / "test.jsonl").unlink()
    with pytest.raises(SchemaViolation, match="missing split"):
        read_dataset(tmp_path)


def test_tfidf_closed_form():
    idf = build_idf(["alpha beta", "alpha gamma"])
    w = math.log(2) + 1  # df = 1 terms; "alpha" has idf ln(1) + 1 = 1
    expected = 1 / (1 + w * w)
    assert tfidf_cosine("alpha beta", "alpha gamma", idf) == pytest.approx(expected)
    assert expected == pytest.approx(0.258615, abs=1e-6)
    assert cosine_dense([1, w, 0], [1, 0, w]) == pytest.approx(expected)


def test_tfidf_trivial_cases():
    idf = build_idf(["a b c", "d e"])
    assert tfidf_cosine("a b c", "a b c", idf) == pytest.approx(1.0)
    assert tfidf_cosine("a b c", "d e", idf) == 0.0
    assert tfidf_cosine("", "a", idf) == 0.0


@given(st.lists(st.text(alphabet="abcde ", max_size=20), min_size=2, max_size=6))
def test_tfidf_symmetric(docs):
    idf = build_idf(docs)
    for a in docs:
        for b in docs:
            assert tfidf_cosine(a, b, idf) == pytest.approx(tfidf_cosine(b, a, idf))
        if a.split():
            assert tfidf_cosine(a, a, idf) == pytest.approx(1.0)


def test_detect_overlap_trivial():
    a = {"a1": "graph parsing in linear time", "a2": "protein folding with diffusion"}
    assert detect_overlap(a, {"b1": "graph parsing in linear time"}).flagged_fraction == 1.0
    assert detect_overlap(a, {"b1": "stock markets crash often"}).flagged_fraction == 0.0
    with pytest.raises(EmptyInput):
        detect_overlap({}, a)


def test_detect_overlap_matches_pure_python_cosine():
    rng = random.Random(5)
    vocab = [f"w{i}" for i in range(40)]
    a = [" ".join(rng.choice(vocab) for _ in range(rng.randint(0, 15))) for _ in range(30)]
    b = [" ".join(rng.choice(vocab) for _ in range(rng.randint(0, 15))) for _ in range(20)]
    report = detect_overlap(a, b, threshold=0.3, chunk=7)
    idf = build_idf(a + b)
    for row, doc in zip(report.rows, b):
        sims = [tfidf_cosine(doc, d, idf) for d in a]
        best = max(sims)
        assert row.similarity == pytest.approx(best, abs=1e-9)
        if best > 0:
            assert sims[int(row.best_match_id)] == pytest.approx(best, abs=1e-9)
        assert row.flagged == (best > 0.3)


def test_overlap_csv(tmp_path):
    r = detect_overlap(["a b c"], ["a b c", "x y"])
    r.write_csv(tmp_path / "o.csv")
    lines = (tmp_path / "o.csv").read_text().splitlines()
    assert lines[0] == "doc_id,best_match_id,similarity,flagged"
    assert lines[1] == "0,0,1.000000,1" and lines[2] == "1,,0.000000,0"
