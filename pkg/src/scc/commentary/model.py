"""Category decoder: attention over context rows, LSTM generation, loss.

Each decode step feeds the previous word embedding through the LSTM, gathers
an attentional context vector from the category's rows (or the multi-choices
encoder), and scores the vocabulary from the concatenated hidden and context
vectors. The first input embedding carries a projection of the current-board
representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..data.vocab import BOS_ID, EOS_ID, Vocabulary
from ..encoders import MultiChoiceEncoder
from ..nn import (Dense, Embedding, LSTMCell, Parameter, Tensor, concat,
                  glorot_uniform, matmul, mul, no_grad, softmax, softmax_xent)
from .categories import CommentCategory, CommentarySample, GenerationConfig
from .contexts import AuxRecord, BuiltContext


def attend(rows: Tensor, att_w: Tensor, h: Tensor) -> tuple[Tensor, Tensor]:
    """Bilinear attention: scores rows against W h, returns (z, weights)."""
    scores = matmul(rows, matmul(att_w, h))
    a = softmax(scores)
    return matmul(a, rows), a


class CategoryModel:
    """Decoder parameters for one comment category."""

    def __init__(self, category: CommentCategory, vocab_size: int, d: int,
                 hidden_dim: int, embed_dim: int, seed: int = 0,
                 name: Optional[str] = None):
        name = name or f"decoder.{category.value}"
        rng = np.random.default_rng(seed)
        self.category = category
        self.vocab_size = vocab_size
        self.embed = Embedding(vocab_size, embed_dim, f"{name}.embed", rng)
        self.lstm = LSTMCell(embed_dim, hidden_dim, f"{name}.lstm", rng)
        self.att_w = Parameter(glorot_uniform((d, hidden_dim), d, hidden_dim, rng),
                               f"{name}.att.w")
        self.out = Dense(hidden_dim + d, vocab_size, f"{name}.out", rng)
        self.start_proj = Dense(d, embed_dim, f"{name}.start", rng)
        self.w_diff: Optional[Parameter] = None
        if category is CommentCategory.QUALITY:
            self.w_diff = Parameter(
                glorot_uniform((d, 2 * d + 1), 2 * d + 1, d, rng),
                f"{name}.w_diff")

    def parameters(self) -> list[Parameter]:
        params = (self.embed.parameters() + self.lstm.parameters()
                  + [self.att_w] + self.out.parameters()
                  + self.start_proj.parameters())
        if self.w_diff is not None:
            params.append(self.w_diff)
        return params

    def _context_vector(self, built: BuiltContext, mce: MultiChoiceEncoder,
                        h: Tensor) -> Tensor:
        if built.uses_choices:
            z, _ = mce.context(built.choices, self.att_w, h)
        else:
            z, _ = attend(built.rows, self.att_w, h)
        return z

    def _input_embedding(self, token: int, step: int, built: BuiltContext) -> Tensor:
        x = self.embed(token)
        if step == 0:
            x = x + self.start_proj(built.es0)
        return x

    def step_logits(self, token: int, step: int, state, built: BuiltContext,
                    mce: MultiChoiceEncoder):
        x = self._input_embedding(token, step, built)
        h, c = self.lstm.step(x, state)
        z = self._context_vector(built, mce, h)
        return (h, c), self.out(concat([h, z]))


@dataclass
class StepRecord:
    logits: np.ndarray
    target: int


def generation_loss(sample: CommentarySample, built: BuiltContext,
                    model: CategoryModel, mce: MultiChoiceEncoder
                    ) -> tuple[Tensor, list[StepRecord]]:
    """Teacher-forced mean per-token cross entropy, end marker included."""
    targets = sample.tokens
    for t in targets:
        if not 0 <= t < model.vocab_size:
            raise IndexError(f"token id {t} outside vocabulary of "
                             f"{model.vocab_size}")
    prev = (BOS_ID,) + targets[:-1]
    state = model.lstm.initial_state()
    total = None
    records: list[StepRecord] = []
    for step, (prev_id, target) in enumerate(zip(prev, targets)):
        state, logits = model.step_logits(prev_id, step, state, built, mce)
        records.append(StepRecord(logits.data.copy(), target))
        _, step_loss = softmax_xent(logits, target)
        total = step_loss if total is None else total + step_loss
    return mul(total, 1.0 / len(targets)), records


def teacher_forced_accuracy(records: list[StepRecord]) -> float:
    hits = sum(1 for r in records if int(np.argmax(r.logits)) == r.target)
    return hits / len(records)


@dataclass
class CommentResult:
    category: CommentCategory
    token_ids: list[int]
    text: str
    aux: AuxRecord


@dataclass
class _Beam:
    tokens: list[int]
    logprob: float
    state: tuple
    finished: bool

    def score(self, length_penalty: float) -> float:
        length = max(len(self.tokens), 1)
        return self.logprob / (length ** length_penalty)


def _decode_greedy(model: CategoryModel, mce: MultiChoiceEncoder,
                   built: BuiltContext, max_tokens: int) -> list[int]:
    state = model.lstm.initial_state()
    prev = BOS_ID
    out: list[int] = []
    for step in range(max_tokens):
        state, logits = model.step_logits(prev, step, state, built, mce)
        token = int(np.argmax(logits.data))
        if token == EOS_ID:
            break
        out.append(token)
        prev = token
    return out


def _decode_beam(model: CategoryModel, mce: MultiChoiceEncoder,
                 built: BuiltContext, config: GenerationConfig) -> list[int]:
    width = config.beam_width
    beams = [_Beam([], 0.0, model.lstm.initial_state(), False)]
    finished: list[_Beam] = []
    for step in range(config.max_tokens):
        candidates: list[tuple[float, int, _Beam]] = []
        for beam in beams:
            if beam.finished:
                continue
            prev = beam.tokens[-1] if beam.tokens else BOS_ID
            state, logits = model.step_logits(prev, step, beam.state, built, mce)
            z = logits.data - logits.data.max()
            logp = z - np.log(np.exp(z).sum())
            top = np.argsort(-logp, kind="stable")[:width]
            for token in top:
                candidates.append((beam.logprob + float(logp[token]),
                                   int(token), _Beam(beam.tokens, 0.0, state, False)))
        if not candidates:
            break
        candidates.sort(key=lambda c: (-c[0], c[1]))
        beams = []
        for logprob, token, parent in candidates[:width]:
            nb = _Beam(parent.tokens + [token], logprob, parent.state,
                       token == EOS_ID)
            if nb.finished:
                finished.append(nb)
            else:
                beams.append(nb)
        if not beams:
            break
    for beam in beams:  # force-finish anything still open
        finished.append(beam)
    best = max(finished, key=lambda b: b.score(config.length_penalty))
    tokens = best.tokens
    if tokens and tokens[-1] == EOS_ID:
        tokens = tokens[:-1]
    return tokens


def decode_comment(built: BuiltContext, model: CategoryModel,
                   mce: MultiChoiceEncoder, vocab: Vocabulary,
                   config: Optional[GenerationConfig] = None) -> CommentResult:
    """Generate a comment for an already-built context."""
    config = config or GenerationConfig()
    with no_grad():
        if config.mode == "greedy":
            tokens = _decode_greedy(model, mce, built, config.max_tokens)
        else:
            tokens = _decode_beam(model, mce, built, config)
    text = " ".join(vocab.decode(tokens))
    return CommentResult(category=built.category, token_ids=tokens,
                         text=text, aux=built.aux)
