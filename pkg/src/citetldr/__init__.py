"""Build a one-sentence scientific summarization dataset from citation sentences."""

from .rouge import RougeScore, score_pair, tokenize
from .corpus import PaperRecord, is_eligible, parse_record
from .extraction import adapt_style, extract_candidates, normalize_citation
from .filtering import FilterThresholds, FunnelStats, run_filter
from .dataset import DatasetBundle, SummExample, assign_splits, detect_overlap
from .baselines import ext_heuristic, ext_lead, ext_oracle
from .evaluate import evaluate_system

__version__ = "0.1.0"
