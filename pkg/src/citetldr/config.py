"""Pipeline configuration and its ``key = value`` file format."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .extraction import DEFAULT_HEADING_PATTERNS, DEFAULT_MIN_TOKENS
from .filtering import FilterThresholds

# keys that do not change any output and are left out of the config echo
_EXECUTION_ONLY = {"workers"}


@dataclass(frozen=True)
class PipelineConfig:
    inputs: tuple[str, ...] = ()
    output_dir: str = ""
    r1_recall_min: float = 0.50
    r2_recall_min: float = 0.20
    rl_recall_min: float = 0.40
    ratios: tuple[float, float, float] = (0.90, 0.05, 0.05)
    seed: int = 0
    stem: bool = False
    min_sentence_tokens: int = DEFAULT_MIN_TOKENS
    heading_patterns: tuple[str, ...] = DEFAULT_HEADING_PATTERNS
    overlap_threshold: float = 0.9
    workers: int = 1

    @property
    def thresholds(self) -> FilterThresholds:
        return FilterThresholds(self.r1_recall_min, self.r2_recall_min, self.rl_recall_min)

    def validate(self) -> "PipelineConfig":
        if not self.inputs or not all(self.inputs):
            raise ValueError("at least one input path is required")
        if not self.output_dir:
            raise ValueError("output_dir is required")
        self.thresholds  # range check
        if len(self.ratios) != 3 or any(r <= 0 for r in self.ratios) or abs(sum(self.ratios) - 1) > 1e-9:
            raise ValueError(f"ratios must be three positive numbers summing to 1, got {self.ratios}")
        if not 0 <= self.overlap_threshold <= 1:
            raise ValueError("overlap_threshold must be in [0, 1]")
        if self.min_sentence_tokens < 0 or self.workers < 1:
            raise ValueError("min_sentence_tokens must be >= 0 and workers >= 1")
        if not self.heading_patterns:
            raise ValueError("heading_patterns must not be empty")
        return self

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            if f.name in _EXECUTION_ONLY:
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ", ".join(str(x) for x in v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    raw = raw.strip()
    if kind == "bool":
        low = raw.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"{key}: expected a boolean, got {raw!r}")
        return low in ("true", "1", "yes")
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "str":
        return raw
    items = tuple(x.strip() for x in raw.split(",") if x.strip())
    if "float" in kind:
        return tuple(float(x) for x in items)
    return items


def parse_config_text(text: str) -> dict:
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {n}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ValueError(f"config line {n}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, raw)
        except ValueError as e:
            raise ValueError(f"config line {n}: {e}") from None
    return out


def load_config(path=None, **overrides) -> PipelineConfig:
    """File values first, then non-None ``overrides`` (command-line flags)."""
    values = parse_config_text(Path(path).read_text(encoding="utf-8")) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return replace(PipelineConfig(), **values)
