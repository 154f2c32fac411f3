"""Text codecs for positions and moves: FEN, UCI and SAN."""

from __future__ import annotations

import re

from .board import (BLACK, KING, KNIGHT, PAWN, WHITE, AmbiguousMoveError,
                    Board, CASTLE_BK, CASTLE_BQ, CASTLE_WK, CASTLE_WQ,
                    FenError, IllegalMoveError, Move, MoveParseError,
                    Square, apply_move, square_name)

_PIECE_LETTERS = {"P": 1, "N": 2, "B": 3, "R": 4, "Q": 5, "K": 6,
                  "p": -1, "n": -2, "b": -3, "r": -4, "q": -5, "k": -6}
_LETTER_OF = {v: k for k, v in _PIECE_LETTERS.items()}
_SAN_PIECE = {2: "N", 3: "B", 4: "R", 5: "Q", 6: "K"}

_UCI_RE = re.compile(r"^([a-h][1-8])([a-h][1-8])([nbrq]?)$")
_SAN_RE = re.compile(
    r"^([NBRQK]?)([a-h]?)([1-8]?)(x?)([a-h][1-8])(?:=([NBRQ]))?$")


def parse_fen(text: str) -> Board:
    """Parse a 6-field FEN record into a validated Board."""
    fields = text.split()
    if len(fields) != 6:
        raise FenError(f"expected 6 FEN fields, got {len(fields)}")
    placement_f, stm_f, castle_f, ep_f, half_f, full_f = fields

    ranks = placement_f.split("/")
    if len(ranks) != 8:
        raise FenError(f"placement field: expected 8 ranks, got {len(ranks)}")
    placement = [0] * 64
    for i, row in enumerate(ranks):
        rank = 7 - i
        file = 0
        for ch in row:
            if ch.isdigit():
                step = int(ch)
                if not 1 <= step <= 8:
                    raise FenError(f"placement field: bad skip digit {ch!r}")
                file += step
            else:
                code = _PIECE_LETTERS.get(ch)
                if code is None:
                    raise FenError(f"placement field: illegal piece letter {ch!r}")
                if file > 7:
                    raise FenError(f"placement field: rank {rank + 1} overflows")
                placement[rank * 8 + file] = code
                file += 1
        if file != 8:
            raise FenError(f"placement field: rank {rank + 1} has {file} files")

    if stm_f == "w":
        stm = WHITE
    elif stm_f == "b":
        stm = BLACK
    else:
        raise FenError(f"side-to-move field: expected 'w' or 'b', got {stm_f!r}")

    castling = 0
    if castle_f != "-":
        bits = {"K": CASTLE_WK, "Q": CASTLE_WQ, "k": CASTLE_BK, "q": CASTLE_BQ}
        for ch in castle_f:
            bit = bits.get(ch)
            if bit is None or castling & bit:
                raise FenError(f"castling field: bad token {castle_f!r}")
            castling |= bit

    if ep_f == "-":
        ep = -1
    else:
        try:
            ep = Square.from_name(ep_f).index
        except MoveParseError:
            raise FenError(f"en-passant field: bad square {ep_f!r}") from None

    try:
        halfmove = int(half_f)
    except ValueError:
        raise FenError(f"halfmove field: not an integer: {half_f!r}") from None
    try:
        fullmove = int(full_f)
    except ValueError:
        raise FenError(f"fullmove field: not an integer: {full_f!r}") from None

    board = Board(placement, stm, castling, ep, halfmove, fullmove)
    board.validate()
    return board


def emit_fen(board: Board) -> str:
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        empty = 0
        for file in range(8):
            p = board.placement[rank * 8 + file]
            if p == 0:
                empty += 1
            else:
                if empty:
                    row += str(empty)
                    empty = 0
                row += _LETTER_OF[p]
        if empty:
            row += str(empty)
        rows.append(row)
    castle = ""
    for bit, ch in ((CASTLE_WK, "K"), (CASTLE_WQ, "Q"),
                    (CASTLE_BK, "k"), (CASTLE_BQ, "q")):
        if board.castling & bit:
            castle += ch
    ep = square_name(board.ep) if board.ep >= 0 else "-"
    return " ".join(["/".join(rows), "w" if board.stm == WHITE else "b",
                     castle or "-", ep, str(board.halfmove_clock),
                     str(board.fullmove_number)])


def parse_uci(board: Board, text: str) -> Move:
    m = _UCI_RE.match(text)
    if m is None:
        raise MoveParseError(f"not a UCI move: {text!r}")
    from_sq = Square.from_name(m.group(1)).index
    to_sq = Square.from_name(m.group(2)).index
    promo = {"": 0, "n": 2, "b": 3, "r": 4, "q": 5}[m.group(3)]
    move = board.find_move(from_sq, to_sq, promo)
    if move is None:
        raise IllegalMoveError("illegal move", text, board.fen())
    return move


def parse_san(board: Board, text: str) -> Move:
    raw = text.rstrip("+#!?")
    if raw in ("O-O", "0-0"):
        matches = [m for m in board.legal_moves() if m.is_castle_king]
    elif raw in ("O-O-O", "0-0-0"):
        matches = [m for m in board.legal_moves() if m.is_castle_queen]
    else:
        m = _SAN_RE.match(raw)
        if m is None:
            raise MoveParseError(f"not a SAN move: {text!r}")
        piece_ch, from_file, from_rank, capture, target, promo_ch = m.groups()
        kind = _PIECE_LETTERS[piece_ch] if piece_ch else PAWN
        target_sq = Square.from_name(target).index
        promo = _PIECE_LETTERS[promo_ch] if promo_ch else 0
        # Pawn captures must carry the source file ("exd5", not "xd5").
        if kind == PAWN and capture and not from_file:
            raise MoveParseError(f"pawn capture without source file: {text!r}")
        matches = []
        for move in board.legal_moves():
            piece = board.placement[move.from_sq]
            if abs(piece) != kind:
                continue
            if move.to_sq != target_sq or move.promotion != promo:
                continue
            if from_file and move.from_sq & 7 != ord(from_file) - 97:
                continue
            if from_rank and move.from_sq >> 3 != ord(from_rank) - 49:
                continue
            if kind == PAWN and bool(capture) != move.is_capture:
                continue
            matches.append(move)
    if not matches:
        raise IllegalMoveError("no legal move matches SAN", text, board.fen())
    if len(matches) > 1:
        raise AmbiguousMoveError(
            f"ambiguous SAN {text!r} on {board.fen()}: "
            + ", ".join(m.uci() for m in matches))
    return matches[0]


def parse_move_text(board: Board, text: str) -> Move:
    """Resolve UCI or SAN text to a unique legal move on this board."""
    if _UCI_RE.match(text):
        return parse_uci(board, text)
    return parse_san(board, text)


def san(board: Board, move: Move) -> str:
    """Render a legal move in Standard Algebraic Notation."""
    canonical = board.find_move(move.from_sq, move.to_sq, move.promotion)
    if canonical is None:
        raise IllegalMoveError("illegal move", move.uci(), board.fen())
    move = canonical
    if move.is_castle_king:
        text = "O-O"
    elif move.is_castle_queen:
        text = "O-O-O"
    else:
        kind = abs(board.placement[move.from_sq])
        target = square_name(move.to_sq)
        if kind == PAWN:
            text = ""
            if move.is_capture:
                text += chr(97 + (move.from_sq & 7)) + "x"
            text += target
            if move.promotion:
                text += "=" + _SAN_PIECE[move.promotion]
        else:
            text = _SAN_PIECE[kind]
            others = [m for m in board.legal_moves()
                      if m.to_sq == move.to_sq and m.from_sq != move.from_sq
                      and abs(board.placement[m.from_sq]) == kind]
            if others:
                same_file = any(m.from_sq & 7 == move.from_sq & 7 for m in others)
                same_rank = any(m.from_sq >> 3 == move.from_sq >> 3 for m in others)
                if not same_file:
                    text += chr(97 + (move.from_sq & 7))
                elif not same_rank:
                    text += chr(49 + (move.from_sq >> 3))
                else:
                    text += square_name(move.from_sq)
            if move.is_capture:
                text += "x"
            text += target
    if move.gives_check:
        child = apply_move(board, move)
        text += "#" if not child.legal_moves() else "+"
    return text
