"""Command-line entry point: ``citetldr <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analysis, baselines, dataset, evaluate, pipeline
from .config import load_config
from .errors import DataError, SchemaViolation

log = logging.getLogger("citetldr")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_jsonl_texts(path, id_field: str, text_field: str) -> dict[str, str]:
    """``{id: text}`` from a JSON-lines file; line numbers stand in for missing ids."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaViolation(f"{path}:{i + 1}: invalid JSON: {e.msg}") from None
            if text_field not in row:
                raise SchemaViolation(f"{path}:{i + 1}: missing field {text_field!r}")
            text = row[text_field]
            if isinstance(text, list):
                text = " ".join(text)
            key = str(row.get(id_field, i))
            if key in out:
                raise SchemaViolation(f"{path}:{i + 1}: duplicate id {key!r}")
            out[key] = text or ""
    return out


def _config_from(args, **extra):
    overrides = {
        "inputs": tuple(args.input) if getattr(args, "input", None) else None,
        "output_dir": getattr(args, "output_dir", None),
        "r1_recall_min": getattr(args, "r1", None),
        "r2_recall_min": getattr(args, "r2", None),
        "rl_recall_min": getattr(args, "rl", None),
        "ratios": tuple(args.ratios) if getattr(args, "ratios", None) else None,
        "seed": getattr(args, "seed", None),
        "stem": getattr(args, "stem", None),
        "min_sentence_tokens": getattr(args, "min_sentence_tokens", None),
        "heading_patterns": tuple(args.heading_pattern) if getattr(args, "heading_pattern", None) else None,
        "overlap_threshold": getattr(args, "overlap_threshold", None),
        "workers": getattr(args, "workers", None),
    }
    overrides.update(extra)
    try:
        return load_config(getattr(args, "config", None), **overrides)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from None


def cmd_build(args):
    cfg = _config_from(args)
    try:
        cfg.validate()
    except ValueError as e:
        raise UsageError(str(e)) from None
    stats, bundle = pipeline.run_pipeline(cfg)
    print(
        f"papers {stats.input_papers} -> eligible {stats.eligible_papers} -> related work "
        f"{stats.related_work_papers}; single-citation sentences {stats.single_citation_sentences} "
        f"-> kept {stats.post_filter_examples} ({100 * stats.retention:.1f}%)"
    )
    print(f"splits train/val/test: {len(bundle.train)}/{len(bundle.val)}/{len(bundle.test)}")


def cmd_filter(args):
    cfg = _config_from(args, inputs=(args.candidates,))
    try:
        cfg.validate()
    except ValueError as e:
        raise UsageError(str(e)) from None
    examples, stats = pipeline.refilter(args.candidates, cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.to_text(), encoding="utf-8")
    dataset.write_examples(examples, out / "examples.jsonl")
    pipeline.write_funnel(stats, out / "funnel.json")
    print(f"kept {stats.post_filter_examples} of {stats.candidates} candidates")


def cmd_split(args):
    cfg = _config_from(args)
    examples = dataset.read_examples(args.examples)
    bundle = dataset.assign_splits(examples, cfg.ratios, cfg.seed)
    dataset.write_dataset(bundle, args.output_dir)
    print(f"train/val/test: {len(bundle.train)}/{len(bundle.val)}/{len(bundle.test)}")


def cmd_stats(args):
    stats = analysis.compute_stats(dataset.read_dataset(args.dataset))
    analysis.write_stats(stats, args.output_dir)
    print(
        f"{stats.total} examples, {stats.unique_cited_papers} unique cited papers, "
        f"mean citations {stats.mean_citations:.2f}, "
        f"src/tgt words {stats.mean_src_words['all']:.1f}/{stats.mean_tgt_words['all']:.1f}"
    )


def cmd_baseline(args):
    srcs = read_jsonl_texts(args.input, args.id_field, args.src_field)
    refs = read_jsonl_texts(args.input, args.id_field, args.tgt_field) if args.name == "oracle" else {}
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        for ex_id, src in srcs.items():
            choice = baselines.run_baseline(args.name, src, refs.get(ex_id), stem=args.stem)
            fh.write(json.dumps({"example_id": ex_id, "prediction": choice.sentence_text}, ensure_ascii=False) + "\n")
    print(f"wrote {len(srcs)} predictions to {args.output}")


def cmd_eval(args):
    preds = read_jsonl_texts(args.predictions, "example_id", "prediction")
    refs = read_jsonl_texts(args.references, args.id_field, args.tgt_field)
    report = evaluate.evaluate_system(preds, refs, args.name, stem=args.stem)
    table = evaluate.format_table([report])
    if args.output_prefix:
        evaluate.write_report_csv([report], f"{args.output_prefix}.csv")
        Path(f"{args.output_prefix}.txt").write_text(table + "\n", encoding="utf-8")
    print(table)


def cmd_overlap(args):
    a = read_jsonl_texts(args.a, args.a_id_field, args.a_text_field)
    b = read_jsonl_texts(args.b, args.b_id_field, args.b_text_field)
    report = dataset.detect_overlap(a, b, args.threshold)
    if args.output:
        report.write_csv(args.output)
    print(f"{sum(r.flagged for r in report.rows)} of {len(report.rows)} flagged ({100 * report.flagged_fraction:.1f}%)")


def cmd_sample(args):
    bundle = dataset.read_dataset(args.dataset)
    picked = analysis.sample_for_annotation(bundle, args.k, args.seed)
    analysis.write_annotation_sheet(picked, args.output)
    print(f"wrote {len(picked)} examples to {args.output}")


def _add_filter_flags(p):
    p.add_argument("--r1", type=float, help="minimum ROUGE-1 recall (default 0.50)")
    p.add_argument("--r2", type=float, help="minimum ROUGE-2 recall (default 0.20)")
    p.add_argument("--rl", type=float, help="minimum ROUGE-L recall (default 0.40)")
    p.add_argument("--stem", action=argparse.BooleanOptionalAction, default=None)


def _add_split_flags(p):
    p.add_argument("--ratios", type=float, nargs=3, metavar=("TRAIN", "VAL", "TEST"))
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citetldr", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="run the full pipeline on a corpus")
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--input", nargs="+", help="corpus files (JSON lines, optionally .gz)")
    p.add_argument("--output-dir")
    _add_filter_flags(p)
    _add_split_flags(p)
    p.add_argument("--min-sentence-tokens", type=int)
    p.add_argument("--heading-pattern", action="append", help="substring marking a Related Work heading")
    p.add_argument("--overlap-threshold", type=float)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("filter", help="re-filter an existing candidates.jsonl")
    p.add_argument("--config")
    p.add_argument("--candidates", required=True)
    p.add_argument("--output-dir")
    _add_filter_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("split", help="assign leakage-free splits to an examples file")
    p.add_argument("--config")
    p.add_argument("--examples", required=True)
    p.add_argument("--output-dir", required=True)
    _add_split_flags(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("stats", help="dataset statistics as CSV tables")
    p.add_argument("--dataset", required=True)
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("baseline", help="run an extractive baseline")
    p.add_argument("name", choices=["lead", "heuristic", "oracle"])
    p.add_argument("--input", required=True, help="JSON lines with ids, sources (and references for oracle)")
    p.add_argument("--output", required=True)
    p.add_argument("--id-field", default="example_id")
    p.add_argument("--src-field", default="src")
    p.add_argument("--tgt-field", default="tgt")
    p.add_argument("--stem", action="store_true")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("eval", help="score predictions against references")
    p.add_argument("--predictions", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--name", default="system")
    p.add_argument("--id-field", default="example_id")
    p.add_argument("--tgt-field", default="tgt")
    p.add_argument("--output-prefix")
    p.add_argument("--stem", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("overlap", help="TF-IDF near-duplicate audit of B against A")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--a-id-field", default="example_id")
    p.add_argument("--a-text-field", default="src")
    p.add_argument("--b-id-field", default="example_id")
    p.add_argument("--b-text-field", default="src")
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--output")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("sample", help="draw an annotation sample")
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except UsageError as e:
        print(f"citetldr {args.command}: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except pipeline.StageError as e:
        print(f"citetldr {args.command}: error in stage {e.stage}: {e.error}", file=sys.stderr)
        return EXIT_DATA if isinstance(e.error, (DataError, OSError)) else EXIT_INTERNAL
    except (DataError, OSError) as e:
        print(f"citetldr {args.command}: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
