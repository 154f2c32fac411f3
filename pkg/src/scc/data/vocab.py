"""Token vocabulary with fixed special ids and a deterministic text format."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

PAD_ID, BOS_ID, EOS_ID, UNK_ID = 0, 1, 2, 3
SPECIAL_TOKENS = ("<pad>", "<bos>", "<eos>", "<unk>")
N_SPECIALS = len(SPECIAL_TOKENS)

_HEADER_PREFIX = "#scc-vocab"


class Vocabulary:
    """Bijective token<->id map over ids >= 4; ids 0-3 are reserved specials."""

    def __init__(self, tokens: Sequence[str], min_frequency: int = 1):
        self.tokens = list(tokens)
        self.min_frequency = min_frequency
        self._ids = {t: i + N_SPECIALS for i, t in enumerate(self.tokens)}
        if len(self._ids) != len(self.tokens):
            raise ValueError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return N_SPECIALS + len(self.tokens)

    def token_id(self, token: str) -> int:
        return self._ids.get(token, UNK_ID)

    def token(self, token_id: int) -> str:
        if 0 <= token_id < N_SPECIALS:
            return SPECIAL_TOKENS[token_id]
        idx = token_id - N_SPECIALS
        if not 0 <= idx < len(self.tokens):
            raise IndexError(f"token id {token_id} out of range")
        return self.tokens[idx]

    def encode(self, words: Iterable[str]) -> list[int]:
        return [self.token_id(w) for w in words]

    def decode(self, ids: Iterable[int], skip_specials: bool = True) -> list[str]:
        out = []
        for i in ids:
            if skip_specials and i < N_SPECIALS:
                continue
            out.append(self.token(i))
        return out

    # One token per line after a single header line; a token's id is its
    # 0-based line number among token lines plus the 4 reserved specials.
    def save(self, path: str | Path) -> None:
        lines = [f"{_HEADER_PREFIX} v1 min_frequency={self.min_frequency} "
                 f"offset={N_SPECIALS} specials={','.join(SPECIAL_TOKENS)}"]
        lines.extend(self.tokens)
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or not lines[0].startswith(_HEADER_PREFIX):
            raise ValueError(f"{path}: missing vocabulary header")
        min_freq = 1
        for part in lines[0].split():
            if part.startswith("min_frequency="):
                min_freq = int(part.split("=", 1)[1])
        return cls(lines[1:], min_frequency=min_freq)


def build_vocab(token_sequences: Iterable[Sequence[str]],
                min_frequency: int = 2, max_size: int = 20000) -> Vocabulary:
    """Frequency-ranked vocabulary; ties break lexicographically.

    Tokens below `min_frequency` map to the unknown id. Ids are stable for
    identical corpora.
    """
    counts = Counter()
    for seq in token_sequences:
        counts.update(seq)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    kept = [tok for tok, freq in ranked if freq >= min_frequency][:max_size]
    return Vocabulary(kept, min_frequency=min_frequency)
