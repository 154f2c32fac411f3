"""Corpus-level BLEU with clipped n-gram precision and brevity penalty.

Uniform 1/n weights, no smoothing: a zero precision at any order zeroes the
score, matching the common perl-script convention. Single reference per
hypothesis.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

TokenPair = tuple[Sequence[str], Sequence[str]]


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_corpus(pairs: Sequence[TokenPair], max_n: int) -> float:
    """BLEU over (hypothesis, reference) token pairs; max_n is 2 or 4."""
    if max_n not in (2, 4):
        raise ValueError(f"max_n must be 2 or 4, got {max_n}")
    if not pairs:
        raise ValueError("bleu_corpus: empty pair list")
    clipped = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in pairs:
        hyp, ref = list(hyp), list(ref)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_counts = _ngrams(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _ngrams(ref, n)
            totals[n - 1] += sum(hyp_counts.values())
            clipped[n - 1] += sum(min(count, ref_counts[gram])
                                  for gram, count in hyp_counts.items())
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(max_n):
        if totals[n] == 0 or clipped[n] == 0:
            return 0.0
        log_sum += math.log(clipped[n] / totals[n])
    geo_mean = math.exp(log_sum / max_n)
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * geo_mean
