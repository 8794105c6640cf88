#!/usr/bin/env python3
"""Write the hand-authored mini corpus used by the tests.

Paragraph text uses ``{surface|bib_key}`` markup for citation spans; offsets
are computed here so the fixture stays consistent when sentences change.

Expected outcome (counted by hand, see tests/test_golden.py): 16 records, 4
eligible citing papers, 25 Related Work sentences, 20 candidates reaching the
recall filter, 7 kept.
"""

import json
import re
import sys
from pathlib import Path

MARK = re.compile(r"\{([^|}]+)\|([^}]+)\}")


def paragraph(section, marked):
    text, spans, pos, out = "", [], 0, []
    for m in MARK.finditer(marked):
        out.append(marked[pos : m.start()])
        start = sum(len(s) for s in out)
        out.append(m.group(1))
        spans.append({"start": start, "end": start + len(m.group(1)), "text": m.group(1), "ref_id": m.group(2)})
        pos = m.end()
    out.append(marked[pos:])
    text = "".join(out)
    return {"section": section, "text": text, "cite_spans": spans}


def cited(pid, title, abstract, fos):
    return {
        "paper_id": pid,
        "title": title,
        "abstract": abstract,
        "body_text": [],
        "bib_entries": {},
        "mag_field_of_study": fos,
    }


CITED = [
    cited("C01", "Linear-time graph parsing",
          "We propose a fast graph parser for dependency trees. The parser runs in linear time and "
          "matches the accuracy of slower transition systems.", ["Computer Science"]),
    cited("C02", "Contrastive sentence embeddings",
          "We introduce a contrastive objective for sentence embeddings. Training on paraphrase pairs "
          "improves semantic similarity benchmarks.", ["Computer Science", "Mathematics"]),
    cited("C03", "Table QA benchmark",
          "This paper presents a benchmark for question answering over tables. Models must combine "
          "retrieval with numerical reasoning.", ["Computer Science"]),
    cited("C04", "Diffusion for protein backbones",
          "We study protein folding with diffusion models. Our sampler generates diverse and stable "
          "backbone structures.", ["Biology", "Computer Science"]),
    cited("C05", "Mergeable distinct counting",
          "We describe a streaming algorithm for counting distinct elements. The sketch uses logarithmic "
          "memory and supports merging.", ["Mathematics", "Computer Science"]),
    cited("C06", "Low-rank adaptation",
          "We present a low-rank adaptation method for large language models. Only small update matrices "
          "are trained while the base weights stay frozen.", ["Computer Science"]),
    cited("C07", "SGD on nonconvex objectives",
          "We analyze the convergence of stochastic gradient descent on nonconvex objectives. The rate "
          "depends on the variance of the gradient noise.", ["Mathematics"]),
    cited("C08", "Segmentation survey",
          "A survey of image segmentation methods covering classical and deep approaches.", ["Computer Science"]),
    cited("C09", "Low-resource translation",
          "We propose a neural machine translation system for low resource languages. Back translation "
          "provides synthetic parallel data.", []),
    cited("C10", "Legal contracts corpus",
          "We collect a corpus of annotated legal contracts. Clause classification baselines are provided.",
          ["Law"]),
]

P0 = {
    "paper_id": "P0",
    "title": "Parsing with graphs",
    "abstract": "We parse sentences into graphs.",
    "body_text": [
        paragraph("1 Introduction", "Dependency parsing is a core task {[1]|b1}."),
        paragraph("2 Related Work",
                  "{Smith et al. [1]|b1} propose a fast graph parser for dependency trees. "
                  "Parsing has a long history."),
        paragraph("3 Method", "We build on this line of work."),
    ],
    "bib_entries": {"b1": {"link": "C01"}},
    "mag_field_of_study": ["Computer Science"],
}

P1 = {
    "paper_id": "P1",
    "title": "Efficient encoders",
    "abstract": "We study efficient encoders.",
    "body_text": [
        paragraph("2. Related Work",
                  "{Jones (2019)|b1} showed that the parser runs in linear time. "
                  "{Gao et al. [2]|b2} introduce a contrastive objective for sentence embeddings trained on "
                  "paraphrase pairs. Both {[2]|b2} and {[3]|b3} study embeddings. "
                  "{Smith et al. [1]|b1} is widely used in industry for many tasks."),
        paragraph("2. Related Work",
                  "We adopt {[2]|b2} as our encoder in all experiments. "
                  "{Lee [4]|b4} reviews classical methods for image segmentation. "
                  "Early work {[5]|b5} used hand-crafted rules. "
                  "Recent systems {[6]|b6} scale this idea further."),
    ],
    "bib_entries": {
        "b1": {"link": "C01"},
        "b2": {"link": "C02"},
        "b3": {"link": "C03"},
        "b4": {"link": "C08"},
        "b5": {"link": None},
        "b6": {"link": "C99"},
    },
    "mag_field_of_study": ["Computer Science"],
    "year": 2021,
}

P2 = {
    "paper_id": "P2",
    "title": "Generative structure models",
    "abstract": "We generate structures.",
    "body_text": [
        paragraph("BACKGROUND AND RELATED WORK",
                  "{Park [4]|b4} generates diverse and stable backbone structures with diffusion models. "
                  "{Wu [5]|b5} describe a streaming sketch that uses logarithmic memory. "
                  "Unlike {Chen [3]|b3}, our model does not need any retrieval step. "
                  "{Lee and Kim [3]|b3} tables benchmark reasoning question presents retrieval answering numerical. "
                  "See {[3]|b3} too. "
                  "{Park [4]|b4} stable backbone structures diffusion models protein folding. "
                  "{Wu [5]|b5} memory supports counting the elements using merging."),
    ],
    "bib_entries": {"b3": {"link": "C03"}, "b4": {"link": "C04"}, "b5": {"link": "C05"}},
    "mag_field_of_study": ["Biology"],
}

P3 = {
    "paper_id": "P3",
    "title": "Adapting large models",
    "abstract": "We adapt large models cheaply.",
    "body_text": [
        paragraph("Related Works",
                  "{Hu et al. [6]|b6} train only small update matrices while the base weights stay frozen. "
                  "{Kim [7]|b7} bound the rate of convergence in convex settings. "
                  "{[6]|b6} has been cited by thousands of papers. "
                  "{Ng [7]|b7} studies optimization on graphs using gradient noise."),
        paragraph("Related Works",
                  "{Koehn [9]|b9} is a popular toolkit for machine translation. "
                  "The contracts corpus of {[10]|b10} is used for evaluation. "
                  "Back translation of {[9]|b9} provides synthetic parallel data for training. "
                  "{Zhou [10]|b10} reports results on legal contracts."),
        paragraph("5 Experiments",
                  "{Hu et al. [6]|b6} train only small update matrices while the base weights stay frozen."),
    ],
    "bib_entries": {
        "b6": {"link": "C06"},
        "b7": {"link": "C07"},
        "b9": {"link": "C09"},
        "b10": {"link": "C10"},
    },
    "mag_field_of_study": ["Computer Science"],
}

# ineligible citing papers: no abstract / no linked bibliography
P4 = {**P0, "paper_id": "P4", "abstract": ""}
P5 = {**P0, "paper_id": "P5", "bib_entries": {"b1": {"link": None}}}

RECORDS = [P0, P1, P2, P3, P4, P5, *CITED]


def main(out=None):
    out = Path(out or Path(__file__).resolve().parent.parent / "tests" / "data" / "golden_corpus.jsonl")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for r in RECORDS:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")
    print(f"wrote {len(RECORDS)} records to {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])
