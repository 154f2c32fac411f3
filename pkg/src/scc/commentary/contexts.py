"""Per-category assembly of the attention context.

Description attends over the move rows plus the current board state; quality
over the two board states and their difference embedding; comparison,
planning and contexts go through the multi-choices encoder over candidate
continuations. All win rates are expressed from the perspective of the
player making the commented move.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..chess import Board, Move, apply_move
from ..encoders import Choice, MoveEncoder, MultiChoiceEncoder, move_features
from ..engine import EngineNet, rollout, select_alternative
from ..nn import Tensor, concat, reshape, sub
from .categories import CommentCategory


class NoContinuationError(ValueError):
    """Planning commentary requested on a position with no continuation."""


@dataclass
class AuxRecord:
    """Inference byproducts surfaced alongside generated text."""

    win_rate_before: float            # v before the move, mover perspective
    win_rate_after: float             # v after the move, mover perspective
    alternative: Optional[Move] = None
    alternative_degenerate: bool = False
    rollout_moves: list[Move] = field(default_factory=list)


@dataclass
class ContextPlan:
    """Engine decisions a context is built from (boards, moves, win rates)."""

    category: CommentCategory
    board: Board
    move: Move
    board_after: Board
    pairs: list[tuple[Board, Move, Board]]  # (before, move, after) per choice
    aux: AuxRecord


@dataclass
class BuiltContext:
    """Attention memory realized as tensors plus the decoder start state."""

    category: CommentCategory
    rows: Optional[Tensor]            # [n, d] for description/quality
    labels: list[str]
    choices: list[Choice]             # for comparison/planning/contexts
    es0: Tensor                       # current-board representation
    aux: AuxRecord

    @property
    def uses_choices(self) -> bool:
        return bool(self.choices)


def plan_contexts(category: CommentCategory, board: Board, move: Move,
                  engine: EngineNet, horizon: int = 4) -> ContextPlan:
    """Choose the boards and moves a category's context will encode."""
    board_after = apply_move(board, move)
    _, v0 = engine.encode_state(board)
    _, v1_raw = engine.encode_state(board_after)
    aux = AuxRecord(win_rate_before=v0, win_rate_after=1.0 - v1_raw)

    pairs: list[tuple[Board, Move, Board]] = []
    if category is CommentCategory.COMPARISON:
        alt, degenerate = select_alternative(engine, board, move)
        aux.alternative = alt
        aux.alternative_degenerate = degenerate
        alt_after = board_after if degenerate else apply_move(board, alt)
        pairs = [(board, move, board_after), (board, alt, alt_after)]
    elif category in (CommentCategory.PLANNING, CommentCategory.CONTEXTS):
        continuation = rollout(engine, board_after, horizon)
        prev = board_after
        for after, mv in continuation:
            pairs.append((prev, mv, after))
            prev = after
        aux.rollout_moves = [mv for _, mv, _ in pairs]
        if category is CommentCategory.PLANNING:
            if not pairs:
                raise NoContinuationError(
                    f"no continuation from terminal position {board_after.fen()!r}")
        else:
            pairs = [(board, move, board_after)] + pairs
    return ContextPlan(category, board, move, board_after, pairs, aux)


StateFn = Callable[[Board], tuple[Tensor, Tensor]]


def _graph_state_fn(engine: EngineNet) -> StateFn:
    return engine.state_value_graph


def cached_state_fn(engine: EngineNet, cache: dict) -> StateFn:
    """Constant-tensor states for a frozen engine, memoized per board."""

    def fn(board: Board) -> tuple[Tensor, Tensor]:
        hit = cache.get(board)
        if hit is None:
            es, v = engine.encode_state(board)
            hit = (es, v)
            cache[board] = hit
        return Tensor(hit[0]), Tensor(np.asarray(hit[1]))
    return fn


def realize_context(plan: ContextPlan, engine: EngineNet,
                    move_encoder: MoveEncoder, mce: MultiChoiceEncoder,
                    w_diff: Optional[Tensor] = None,
                    state_fn: Optional[StateFn] = None) -> BuiltContext:
    """Build the attention memory tensors for a planned context."""
    from ..encoders.multichoice import diff_embed

    state_fn = state_fn or _graph_state_fn(engine)
    mover = plan.board.stm

    def mover_value(b: Board, v: Tensor) -> Tensor:
        return v if b.stm == mover else sub(1.0, v)

    es0, v0 = state_fn(plan.board)
    category = plan.category

    if category is CommentCategory.DESCRIPTION:
        move_rows = move_encoder.encode(move_features(plan.board, plan.move))
        rows = concat([move_rows, reshape(es0, (1, -1))], axis=0)
        labels = ["move-feature"] * 6 + ["board-state"]
        return BuiltContext(category, rows, labels, [], es0, plan.aux)

    if category is CommentCategory.QUALITY:
        if w_diff is None:
            raise ValueError("quality context requires the difference matrix")
        es1, v1_raw = state_fn(plan.board_after)
        v0_m = mover_value(plan.board, v0)
        v1_m = mover_value(plan.board_after, v1_raw)
        e_d = diff_embed(w_diff, es0, es1, sub(v1_m, v0_m))
        rows = concat([reshape(es0, (1, -1)), reshape(es1, (1, -1)),
                       reshape(e_d, (1, -1))], axis=0)
        labels = ["board-state", "board-state", "diff-embed"]
        return BuiltContext(category, rows, labels, [], es0, plan.aux)

    choices = []
    for before, mv, after in plan.pairs:
        es, v_raw = state_fn(after)
        v = mover_value(after, v_raw)
        move_rows = move_encoder.encode(move_features(before, mv))
        choices.append(Choice(
            board=after, move=mv, state=es, win_rate=v,
            move_rows=move_rows, value_row=mce.value_embed(es, v),
            win_rate_value=float(v.data)))
    return BuiltContext(category, None, [], choices, es0, plan.aux)


def build_contexts(category: CommentCategory, board: Board, move: Move,
                   engine: EngineNet, move_encoder: MoveEncoder,
                   mce: MultiChoiceEncoder, w_diff: Optional[Tensor] = None,
                   horizon: int = 4,
                   state_fn: Optional[StateFn] = None) -> BuiltContext:
    """Plan and realize the context for one (board, move, category) input."""
    plan = plan_contexts(category, board, move, engine, horizon)
    return realize_context(plan, engine, move_encoder, mce, w_diff, state_fn)
