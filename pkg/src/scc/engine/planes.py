"""Board encoding into the 20 stacked 8x8 input feature planes.

Planes 0-5 hold the side-to-move pieces (pawn, rook, knight, bishop, queen,
king), 6-11 the opponent's in the same order, both oriented so the side to
move plays toward increasing row index. Planes 12-15 are scalar-broadcast
counters (repetitions for each side beyond the first occurrence, total moves,
and plies with no progress); 16-19 are all-ones/all-zeros castling rights
(mover kingside, mover queenside, opponent kingside, opponent queenside).
"""

from __future__ import annotations

import numpy as np

from ..chess import BLACK, WHITE, Board
from ..chess.board import (CASTLE_BK, CASTLE_BQ, CASTLE_WK, CASTLE_WQ,
                           BISHOP, KING, KNIGHT, PAWN, QUEEN, ROOK)

PLANE_COUNT = 20

_KIND_TO_PLANE = {PAWN: 0, ROOK: 1, KNIGHT: 2, BISHOP: 3, QUEEN: 4, KING: 5}


def encode_planes(board: Board) -> np.ndarray:
    """Encode a position as a [20, 8, 8] float array."""
    planes = np.zeros((PLANE_COUNT, 8, 8), dtype=np.float64)
    us = board.stm
    for sq in range(64):
        piece = board.placement[sq]
        if piece == 0:
            continue
        rank, file = sq >> 3, sq & 7
        row = rank if us == WHITE else 7 - rank
        base = 0 if (piece > 0) == (us == WHITE) else 6
        planes[base + _KIND_TO_PLANE[abs(piece)], row, file] = 1.0

    rep_stm = board.repetition_count - 1
    rep_opp = max(board._rep_prev - 1, 0)
    planes[12] = min(rep_stm, 3) / 3.0
    planes[13] = min(rep_opp, 3) / 3.0
    planes[14] = min(board.fullmove_number, 200) / 200.0
    planes[15] = min(board.halfmove_clock, 100) / 100.0

    if us == WHITE:
        rights = (CASTLE_WK, CASTLE_WQ, CASTLE_BK, CASTLE_BQ)
    else:
        rights = (CASTLE_BK, CASTLE_BQ, CASTLE_WK, CASTLE_WQ)
    for i, bit in enumerate(rights):
        if board.castling & bit:
            planes[16 + i] = 1.0
    return planes


def encode_batch(boards: list[Board]) -> np.ndarray:
    return np.stack([encode_planes(b) for b in boards])
