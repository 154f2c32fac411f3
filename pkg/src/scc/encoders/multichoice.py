"""Candidate-continuation weighting and nested attention.

Each candidate (a board reached by a move) contributes eight context rows:
six move rows, the board state, and a value embedding of the state/win-rate
pair. A learned experience vector scores which candidates deserve attention;
per-candidate attention weights are scaled by those choice weights so the
total attention mass stays 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..chess import Board, Move
from ..nn import (Parameter, Tensor, concat, dense, glorot_uniform, matmul,
                  mul, narrow, reshape, softmax, stack)


@dataclass
class Choice:
    """One candidate continuation prepared for the nested attention."""

    board: Board
    move: Move
    state: Tensor          # board representation, width d
    win_rate: Tensor       # scalar, mover-of-the-commented-move perspective
    move_rows: Tensor      # [6, d]
    value_row: Tensor      # [d]
    win_rate_value: float = 0.0

    def rows(self) -> Tensor:
        """[8, d]: six move rows, the board-state row, the value row."""
        return concat([self.move_rows,
                       reshape(self.state, (1, -1)),
                       reshape(self.value_row, (1, -1))], axis=0)


def value_embed(w_val: Tensor, state: Tensor, win_rate: Tensor | float) -> Tensor:
    """Linear map of the (d+1) state/win-rate pair to a width-d embedding."""
    if not isinstance(win_rate, Tensor):
        win_rate = Tensor(np.asarray(win_rate))
    pair = concat([state, reshape(win_rate, (1,))])
    return dense(pair, w_val)


def diff_embed(w_diff: Tensor, state_before: Tensor, state_after: Tensor,
               delta_v: Tensor | float) -> Tensor:
    """Linear map of [state0; state1; v1-v0] to a width-d embedding."""
    if not isinstance(delta_v, Tensor):
        delta_v = Tensor(np.asarray(delta_v))
    triple = concat([state_before, state_after, reshape(delta_v, (1,))])
    return dense(triple, w_diff)


def choice_weights(g: Tensor, states: Tensor) -> Tensor:
    """Soft weights over candidates: softmax of the experience-vector scores."""
    return softmax(matmul(states, g))


def multi_choice_context(choices: Sequence[Choice], g: Tensor, att_w: Tensor,
                         h: Tensor) -> tuple[Tensor, list[Tensor]]:
    """Attention context over all candidates' rows.

    Per candidate i the inner bilinear attention over its 8 rows is scaled by
    the choice weight c_i, so the full weight matrix A sums to 1; the result
    z is the A-weighted sum of all rows.
    """
    if not choices:
        raise ValueError("multi_choice_context: no choices")
    states = stack([c.state for c in choices])
    c = choice_weights(g, states)
    wh = matmul(att_w, h)
    z = None
    weights: list[Tensor] = []
    for i, choice in enumerate(choices):
        rows = choice.rows()
        inner = softmax(matmul(rows, wh))
        a_i = mul(narrow(c, i), inner)
        weights.append(a_i)
        contrib = matmul(a_i, rows)
        z = contrib if z is None else z + contrib
    return z, weights


class MultiChoiceEncoder:
    """Holds the experience vector g and the value mapping matrix."""

    def __init__(self, d: int, seed: int = 0, name: str = "mce"):
        rng = np.random.default_rng(seed)
        self.d = d
        self.g = Parameter(rng.normal(0.0, 0.1, size=d), f"{name}.g")
        self.w_val = Parameter(
            glorot_uniform((d, d + 1), d + 1, d, rng), f"{name}.w_val")

    def value_embed(self, state: Tensor, win_rate: Tensor | float) -> Tensor:
        return value_embed(self.w_val, state, win_rate)

    def context(self, choices: Sequence[Choice], att_w: Tensor,
                h: Tensor) -> tuple[Tensor, list[Tensor]]:
        return multi_choice_context(choices, self.g, att_w, h)

    def parameters(self) -> list[Parameter]:
        return [self.g, self.w_val]
