"""Corpus-level automatic evaluation metrics."""

from .bleu import bleu_corpus
from .meteor import align, max_matches, meteor_pair, meteor_simplified, simple_stem
from .report import CategoryScores, METRIC_NAMES, MetricReport, report

__all__ = [
    "bleu_corpus", "align", "max_matches", "meteor_pair", "meteor_simplified",
    "simple_stem", "CategoryScores", "METRIC_NAMES", "MetricReport", "report",
]
