"""Joint policy/value training objective."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..chess import Board, IllegalMoveError, Move
from ..nn import Tensor, concat, mul, narrow, reshape, sigmoid, softmax_xent, sub, take
from .moveindex import move_to_index
from .network import EngineNet
from .planes import encode_batch

_OUTCOMES = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class TrainingTuple:
    """One replay step: position, move played, final score for the mover."""

    board: Board
    move: Move
    outcome: float

    def __post_init__(self):
        if self.outcome not in _OUTCOMES:
            raise ValueError(f"outcome must be one of {_OUTCOMES}, got {self.outcome}")
        if self.board.find_move(self.move.from_sq, self.move.to_sq,
                                self.move.promotion) is None:
            raise IllegalMoveError("training tuple move is illegal",
                                   self.move.uci(), self.board.fen())


def loss_terms(policy_prob: float, win_rate: float, outcome: float) -> float:
    """Scalar objective for one sample: -log p(move) + (v - v')^2."""
    return -math.log(policy_prob) + (win_rate - outcome) ** 2


def engine_loss(net: EngineNet, batch: list[TrainingTuple]) -> Tensor:
    """Mean over the batch of the policy cross entropy plus value error.

    Builds the training graph; gradients flow into the trunk and both heads.
    """
    if not batch:
        raise ValueError("engine_loss: empty batch")
    boards = [t.board for t in batch]
    es = net.state_from_planes(Tensor(encode_batch(boards)))
    logits = net.policy_head(es)                      # [B, move space]
    values = sigmoid(reshape(net.value_head(es), (-1,)))  # [B]

    total = None
    for i, t in enumerate(batch):
        moves = t.board.legal_moves()
        indices = [move_to_index(m) for m in moves]
        target_idx = move_to_index(t.move)
        try:
            target_pos = indices.index(target_idx)
        except ValueError:
            raise IllegalMoveError("move outside legal mask", t.move.uci(),
                                   t.board.fen()) from None
        legal_logits = take(narrow(logits, i), indices)
        _, xent = softmax_xent(legal_logits, target_pos)
        diff = sub(narrow(values, i), t.outcome)
        sample = xent + mul(diff, diff)
        total = sample if total is None else total + sample
    return mul(total, 1.0 / len(batch))


def policy_nll(net: EngineNet, board: Board, move: Move) -> Tensor:
    """Policy-only cross entropy for a single (board, move) pair."""
    from .planes import encode_planes
    es = net.state_from_planes(Tensor(encode_planes(board)))
    logits = net.policy_head(es)
    moves = board.legal_moves()
    indices = [move_to_index(m) for m in moves]
    target_pos = indices.index(move_to_index(move))
    _, xent = softmax_xent(take(logits, indices), target_pos)
    return xent
