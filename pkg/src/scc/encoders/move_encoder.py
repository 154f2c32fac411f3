"""Move feature extraction and the bi-directional recurrent move encoder.

A move is described by six tokens over closed vocabularies: starting cell,
ending cell, piece at the start, piece at the end (or empty), promotion
state, and checking state. The encoder embeds the tokens and runs them
through a BiRNN, yielding six context rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..chess import Board, IllegalMoveError, Move, square_name
from ..nn import BiRNN, Embedding, Parameter, Tensor, stack

# Token id layout: 64 squares, then 13 piece states, 5 promotion states,
# 2 checking states.
_PIECE_STATE_BASE = 64
_PIECE_STATES = ["white-pawn", "white-knight", "white-bishop", "white-rook",
                 "white-queen", "white-king", "black-pawn", "black-knight",
                 "black-bishop", "black-rook", "black-queen", "black-king",
                 "empty"]
_PROMO_BASE = _PIECE_STATE_BASE + len(_PIECE_STATES)
_PROMO_STATES = ["none", "queen", "rook", "bishop", "knight"]
_CHECK_BASE = _PROMO_BASE + len(_PROMO_STATES)
_CHECK_STATES = ["no-check", "check"]
MOVE_TOKEN_VOCAB = _CHECK_BASE + len(_CHECK_STATES)  # 84

_PROMO_TOKEN = {0: 0, 5: 1, 4: 2, 3: 3, 2: 4}  # piece kind -> promo state index


def _piece_state(code: int) -> int:
    if code == 0:
        return 12
    kind = abs(code) - 1
    return kind if code > 0 else kind + 6


@dataclass(frozen=True)
class MoveFeatureSequence:
    """The six move-description tokens with readable labels."""

    tokens: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != 6:
            raise ValueError(f"expected 6 move feature tokens, got {len(self.tokens)}")
        for t in self.tokens:
            if not 0 <= t < MOVE_TOKEN_VOCAB:
                raise ValueError(f"move feature token {t} out of vocabulary")


def move_features(board: Board, move: Move) -> MoveFeatureSequence:
    """Extract the six-token description of a legal move."""
    canonical = board.find_move(move.from_sq, move.to_sq, move.promotion)
    if canonical is None:
        raise IllegalMoveError("cannot featurize illegal move", move.uci(),
                               board.fen())
    move = canonical
    from_piece = board.placement[move.from_sq]
    to_piece = board.placement[move.to_sq]
    promo_idx = _PROMO_TOKEN[move.promotion]
    check_idx = 1 if move.gives_check else 0
    tokens = (
        move.from_sq,
        move.to_sq,
        _PIECE_STATE_BASE + _piece_state(from_piece),
        _PIECE_STATE_BASE + _piece_state(to_piece),
        _PROMO_BASE + promo_idx,
        _CHECK_BASE + check_idx,
    )
    labels = (
        square_name(move.from_sq),
        square_name(move.to_sq),
        _PIECE_STATES[_piece_state(from_piece)],
        _PIECE_STATES[_piece_state(to_piece)],
        _PROMO_STATES[promo_idx],
        _CHECK_STATES[check_idx],
    )
    return MoveFeatureSequence(tokens, labels)


class MoveEncoder:
    """Embeds move feature tokens and encodes them with a BiRNN."""

    def __init__(self, embed_dim: int, out_dim: int, seed: int = 0,
                 name: str = "move_encoder"):
        rng = np.random.default_rng(seed)
        self.embed = Embedding(MOVE_TOKEN_VOCAB, embed_dim, f"{name}.embed", rng)
        self.rnn = BiRNN(embed_dim, out_dim, f"{name}.rnn", rng)

    def encode(self, features: MoveFeatureSequence) -> Tensor:
        """Six context rows as a [6, out_dim] tensor."""
        inputs = [self.embed(t) for t in features.tokens]
        rows = self.rnn.encode(inputs)
        return stack(rows)

    def parameters(self) -> list[Parameter]:
        return self.embed.parameters() + self.rnn.parameters()
