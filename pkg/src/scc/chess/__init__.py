"""Chess rules core: boards, moves, legality, termination and text codecs."""

from .board import (BLACK, BISHOP, KING, KNIGHT, PAWN, QUEEN, ROOK, WHITE,
                    START_FEN, AmbiguousMoveError, Board, ChessError,
                    FenError, GameStatus, IllegalMoveError, Move,
                    MoveParseError, Piece, Square, apply_move, game_status,
                    legal_moves, perft, square_name)
from .notation import emit_fen, parse_fen, parse_move_text, parse_san, parse_uci, san

__all__ = [
    "WHITE", "BLACK", "PAWN", "KNIGHT", "BISHOP", "ROOK", "QUEEN", "KING",
    "START_FEN", "Board", "Move", "Square", "Piece", "GameStatus",
    "ChessError", "FenError", "MoveParseError", "AmbiguousMoveError",
    "IllegalMoveError", "legal_moves", "apply_move", "game_status", "perft",
    "square_name", "parse_fen", "emit_fen", "parse_uci", "parse_san",
    "parse_move_text", "san",
]
