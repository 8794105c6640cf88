"""Reading S2ORC-style full-text records.

One JSON object per line with ``paper_id``, ``title``, ``abstract``,
``body_text`` (paragraphs with ``cite_spans``), ``bib_entries`` and
``mag_field_of_study``. Other keys are ignored. Records with inconsistent
citation spans are rejected rather than repaired.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .errors import MalformedRecord


@dataclass(frozen=True)
class CiteSpan:
    start: int
    end: int
    surface: str
    bib_key: str


@dataclass(frozen=True)
class Paragraph:
    section_heading: str
    text: str
    cite_spans: tuple[CiteSpan, ...] = ()


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str
    abstract: str
    body: tuple[Paragraph, ...] = ()
    bib_entries: dict[str, Optional[str]] = field(default_factory=dict)
    fields_of_study: tuple[str, ...] = ()

    @property
    def has_citation_info(self) -> bool:
        return any(link for link in self.bib_entries.values())


def _require(cond, message, line_no):
    if not cond:
        raise MalformedRecord(message, line_no)


def _str_field(obj, key, line_no, default=None):
    value = obj.get(key, default)
    if value is None and default is not None:
        value = default
    _require(isinstance(value, str), f"field {key!r} must be a string", line_no)
    return value


def _parse_paragraph(raw, bib_entries, line_no) -> Paragraph:
    _require(isinstance(raw, dict), "body_text entries must be objects", line_no)
    section = _str_field(raw, "section", line_no, default="")
    text = _str_field(raw, "text", line_no)
    raw_spans = raw.get("cite_spans") or []
    _require(isinstance(raw_spans, list), "cite_spans must be an array", line_no)

    spans = []
    prev_end = 0
    for s in raw_spans:
        _require(isinstance(s, dict), "cite span must be an object", line_no)
        start, end = s.get("start"), s.get("end")
        _require(
            type(start) is int and type(end) is int,
            "cite span offsets must be integers",
            line_no,
        )
        _require(
            0 <= start < end <= len(text),
            f"cite span [{start}, {end}) outside paragraph of length {len(text)}",
            line_no,
        )
        _require(start >= prev_end, "cite spans overlap or are unsorted", line_no)
        surface = _str_field(s, "text", line_no)
        _require(
            surface == text[start:end],
            f"cite span text {surface!r} does not match paragraph text {text[start:end]!r}",
            line_no,
        )
        key = s.get("ref_id")
        _require(isinstance(key, str), "cite span ref_id must be a string", line_no)
        _require(key in bib_entries, f"cite span ref_id {key!r} not in bib_entries", line_no)
        spans.append(CiteSpan(start, end, surface, key))
        prev_end = end
    return Paragraph(section, text, tuple(spans))


def parse_record(line: str, line_no: Optional[int] = None) -> PaperRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"invalid JSON: {e.msg}", line_no) from None
    _require(isinstance(obj, dict), "record must be a JSON object", line_no)

    paper_id = obj.get("paper_id")
    _require(isinstance(paper_id, str) and paper_id, "paper_id must be a non-empty string", line_no)
    title = _str_field(obj, "title", line_no, default="")
    abstract = _str_field(obj, "abstract", line_no, default="")

    raw_bib = obj.get("bib_entries") or {}
    _require(isinstance(raw_bib, dict), "bib_entries must be an object", line_no)
    bib_entries = {}
    for key, entry in raw_bib.items():
        _require(isinstance(entry, dict), f"bib entry {key!r} must be an object", line_no)
        link = entry.get("link")
        _require(link is None or isinstance(link, str), f"bib entry {key!r} link must be string or null", line_no)
        bib_entries[key] = link or None

    raw_body = obj.get("body_text") or []
    _require(isinstance(raw_body, list), "body_text must be an array", line_no)
    body = tuple(_parse_paragraph(p, bib_entries, line_no) for p in raw_body)

    fos = obj.get("mag_field_of_study") or []
    _require(
        isinstance(fos, list) and all(isinstance(f, str) for f in fos),
        "mag_field_of_study must be an array of strings",
        line_no,
    )
    return PaperRecord(paper_id, title, abstract, body, bib_entries, tuple(fos))


def record_to_dict(p: PaperRecord) -> dict:
    return {
        "paper_id": p.paper_id,
        "title": p.title,
        "abstract": p.abstract,
        "body_text": [
            {
                "section": par.section_heading,
                "text": par.text,
                "cite_spans": [
                    {"start": s.start, "end": s.end, "text": s.surface, "ref_id": s.bib_key}
                    for s in par.cite_spans
                ],
            }
            for par in p.body
        ],
        "bib_entries": {k: {"link": v} for k, v in p.bib_entries.items()},
        "mag_field_of_study": list(p.fields_of_study),
    }


def serialize_record(p: PaperRecord) -> str:
    return json.dumps(record_to_dict(p), ensure_ascii=False)


def is_eligible(p: PaperRecord) -> bool:
    """Has an abstract, a body, and at least one outbound link to a known paper."""
    return bool(p.abstract.strip()) and bool(p.body) and p.has_citation_info


def open_text(path) -> Iterable[str]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def iter_lines(paths) -> Iterator[tuple[int, str]]:
    """Yield ``(line_no, line)`` for non-blank lines; numbering restarts per file."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    for path in paths:
        with open_text(path) as fh:
            for i, line in enumerate(fh, start=1):
                if line.strip():
                    yield i, line


def iter_records(paths) -> Iterator[PaperRecord]:
    """Stream records from one or more files, rejecting duplicate ids."""
    seen = set()
    for line_no, line in iter_lines(paths):
        rec = parse_record(line, line_no)
        if rec.paper_id in seen:
            raise MalformedRecord(f"duplicate paper_id {rec.paper_id!r}", line_no)
        seen.add(rec.paper_id)
        yield rec
