"""Bijection between moves and the fixed policy index space.

Index = (from * 64 + to) * 5 + promotion slot, with promotion slots ordered
none, queen, rook, bishop, knight. The space is total (20,480 entries);
legality masking happens at evaluation time.
"""

from __future__ import annotations

from ..chess import Move
from ..chess.board import PROMO_SLOT, SLOT_PROMO

MOVE_INDEX_SPACE = 64 * 64 * 5


def move_to_index(move: Move) -> int:
    return (move.from_sq * 64 + move.to_sq) * 5 + PROMO_SLOT[move.promotion]


def index_components(index: int) -> tuple[int, int, int]:
    """Decompose an index into (from_sq, to_sq, promotion kind)."""
    if not 0 <= index < MOVE_INDEX_SPACE:
        raise IndexError(f"move index {index} out of range")
    slot = index % 5
    cell = index // 5
    return cell // 64, cell % 64, SLOT_PROMO[slot]
