"""Comment categories and aligned training samples."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..chess import Board, IllegalMoveError, Move


class CommentCategory(str, Enum):
    DESCRIPTION = "description"
    QUALITY = "quality"
    COMPARISON = "comparison"
    PLANNING = "planning"
    CONTEXTS = "contexts"


CATEGORIES: tuple[CommentCategory, ...] = tuple(CommentCategory)

MAX_COMMENT_TOKENS = 120


@dataclass(frozen=True)
class CommentarySample:
    """One aligned (board, move, category, token ids) record.

    `tokens` are word ids ending with the end-of-sequence marker.
    """

    board: Board
    move: Move
    category: CommentCategory
    tokens: tuple[int, ...]
    game_id: str = ""
    text: str = ""

    def __post_init__(self):
        if self.board.find_move(self.move.from_sq, self.move.to_sq,
                                self.move.promotion) is None:
            raise IllegalMoveError("sample move is illegal", self.move.uci(),
                                   self.board.fen())
        if not self.tokens:
            raise ValueError("sample token sequence is empty")
        if len(self.tokens) > MAX_COMMENT_TOKENS:
            raise ValueError(
                f"sample exceeds {MAX_COMMENT_TOKENS} tokens: {len(self.tokens)}")


@dataclass
class GenerationConfig:
    mode: str = "beam"            # "greedy" or "beam"
    beam_width: int = 4
    max_tokens: int = 50
    length_penalty: float = 0.6

    def __post_init__(self):
        if self.mode not in ("greedy", "beam"):
            raise ValueError(f"unknown generation mode {self.mode!r}")
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
