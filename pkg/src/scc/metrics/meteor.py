"""Simplified METEOR: exact + suffix-stem unigram alignment, no synonyms.

Scores are not comparable with WordNet-backed METEOR numbers, hence the
`meteor_s` name. Two tokens can align when their stems agree (identical
words trivially agree); the alignment maximizes matches and, among maximum
alignments, minimizes the number of chunks (maximal runs contiguous in both
sentences). The per-pair score is F_mean * (1 - penalty) with
F = 10PR / (R + 9P) and penalty = 0.5 * (chunks / matches)^3; the corpus
score is the mean over pairs.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Sequence

_SUFFIXES = ("ings", "ing", "ied", "ies", "ed", "es", "ly", "s")
_MIN_STEM = 3

# Branch-and-bound node budget; exhaustive below it, best-found above.
_NODE_BUDGET = 250_000


def simple_stem(token: str) -> str:
    """Deterministic suffix stripping; keeps at least three characters."""
    for suffix in _SUFFIXES:
        if token.endswith(suffix) and len(token) - len(suffix) >= _MIN_STEM:
            return token[:-len(suffix)]
    return token


def max_matches(hyp_stems: Sequence[str], ref_stems: Sequence[str]) -> int:
    hyp_counts = Counter(hyp_stems)
    ref_counts = Counter(ref_stems)
    return sum(min(count, ref_counts[stem])
               for stem, count in hyp_counts.items())


def align(hyp: Sequence[str], ref: Sequence[str]) -> tuple[int, int]:
    """(matches, chunks) of a maximum, chunk-minimal stem alignment."""
    hyp_stems = [simple_stem(t) for t in hyp]
    ref_stems = [simple_stem(t) for t in ref]
    m = max_matches(hyp_stems, ref_stems)
    if m == 0:
        return 0, 0

    ref_by_stem: dict[str, list[int]] = defaultdict(list)
    for j, stem in enumerate(ref_stems):
        ref_by_stem[stem].append(j)
    # How many hyp tokens of each stem remain at or after position i.
    hyp_remaining = [Counter() for _ in range(len(hyp_stems) + 1)]
    for i in range(len(hyp_stems) - 1, -1, -1):
        hyp_remaining[i] = hyp_remaining[i + 1].copy()
        hyp_remaining[i][hyp_stems[i]] += 1

    best = [len(hyp_stems) + 1]
    nodes = [0]
    ref_free = [True] * len(ref_stems)
    ref_free_count = Counter(ref_stems)

    def upper_bound_matches(i: int) -> int:
        return sum(min(count, ref_free_count[stem])
                   for stem, count in hyp_remaining[i].items())

    def dfs(i: int, matched: int, chunks: int, prev_j: int) -> None:
        if chunks >= best[0]:
            return
        nodes[0] += 1
        if nodes[0] > _NODE_BUDGET:
            return
        if matched == m:
            best[0] = min(best[0], chunks)
            return
        if i >= len(hyp_stems) or matched + upper_bound_matches(i) < m:
            return
        stem = hyp_stems[i]
        candidates = [j for j in ref_by_stem[stem] if ref_free[j]]
        # Explore the run-continuing candidate first for early tight bounds.
        candidates.sort(key=lambda j: (j != prev_j + 1, j))
        for j in candidates:
            ref_free[j] = False
            ref_free_count[stem] -= 1
            extra = 0 if j == prev_j + 1 else 1
            dfs(i + 1, matched + 1, chunks + extra, j)
            ref_free[j] = True
            ref_free_count[stem] += 1
        # Leaving this hyp token unmatched.
        dfs(i + 1, matched, chunks, -2)

    dfs(0, 0, 0, -2)
    return m, best[0]


def meteor_pair(hyp: Sequence[str], ref: Sequence[str]) -> float:
    hyp, ref = list(hyp), list(ref)
    if not hyp or not ref:
        return 0.0
    m, chunks = align(hyp, ref)
    if m == 0:
        return 0.0
    precision = m / len(hyp)
    recall = m / len(ref)
    f_mean = 10.0 * precision * recall / (recall + 9.0 * precision)
    penalty = 0.5 * (chunks / m) ** 3
    return f_mean * (1.0 - penalty)


def meteor_simplified(pairs: Sequence[tuple[Sequence[str], Sequence[str]]]) -> float:
    """Mean per-pair score over the corpus."""
    if not pairs:
        raise ValueError("meteor_simplified: empty pair list")
    return sum(meteor_pair(h, r) for h, r in pairs) / len(pairs)
