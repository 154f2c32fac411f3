"""Category-wise metric report: BLEU-4, BLEU-2 and meteor_s."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bleu import bleu_corpus
from .meteor import meteor_simplified

METRIC_NAMES = ("bleu4", "bleu2", "meteor_s")


@dataclass
class CategoryScores:
    category: str
    pair_count: int
    bleu4: float
    bleu2: float
    meteor_s: float

    def as_record(self) -> dict:
        return {"category": self.category, "pairs": self.pair_count,
                "bleu4": self.bleu4, "bleu2": self.bleu2,
                "meteor_s": self.meteor_s}


@dataclass
class MetricReport:
    per_category: list[CategoryScores]
    overall: CategoryScores

    def records(self) -> list[dict]:
        return [c.as_record() for c in self.per_category] + \
            [self.overall.as_record()]

    def table(self) -> str:
        header = f"{'category':<14}{'pairs':>7}{'BLEU-4':>10}{'BLEU-2':>10}{'meteor_s':>10}"
        lines = [header, "-" * len(header)]
        for c in self.per_category + [self.overall]:
            lines.append(f"{c.category:<14}{c.pair_count:>7}"
                         f"{c.bleu4 * 100:>10.2f}{c.bleu2 * 100:>10.2f}"
                         f"{c.meteor_s * 100:>10.2f}")
        return "\n".join(lines)


def _score(category: str, pairs: Sequence) -> CategoryScores:
    return CategoryScores(category=category, pair_count=len(pairs),
                          bleu4=bleu_corpus(pairs, 4),
                          bleu2=bleu_corpus(pairs, 2),
                          meteor_s=meteor_simplified(pairs))


def report(pairs_by_category: dict[str, Sequence]) -> MetricReport:
    """Metric triple per category plus a pooled (micro-averaged) overall row."""
    if not pairs_by_category:
        raise ValueError("report: no categories")
    per_category = [_score(cat, pairs_by_category[cat])
                    for cat in sorted(pairs_by_category)]
    pooled = [p for cat in sorted(pairs_by_category)
              for p in pairs_by_category[cat]]
    return MetricReport(per_category=per_category,
                        overall=_score("overall", pooled))
