"""Rules-correct chess model: positions, legal move generation, termination.

Squares are indexed 0..63 as rank*8+file (a1=0, h1=7, a8=56). Pieces are
signed ints: +1..+6 for white P,N,B,R,Q,K and -1..-6 for black. Boards are
immutable after construction; every operation returns new values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional

WHITE = 1
BLACK = -1

PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING = 1, 2, 3, 4, 5, 6

PIECE_NAMES = {PAWN: "pawn", KNIGHT: "knight", BISHOP: "bishop",
               ROOK: "rook", QUEEN: "queen", KING: "king"}

# Castling-rights bitmask.
CASTLE_WK, CASTLE_WQ, CASTLE_BK, CASTLE_BQ = 1, 2, 4, 8

# Promotion slot order; also the policy-index promotion order.
PROMO_SLOT = {0: 0, QUEEN: 1, ROOK: 2, BISHOP: 3, KNIGHT: 4}
SLOT_PROMO = {v: k for k, v in PROMO_SLOT.items()}

START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class ChessError(Exception):
    """Base class for chess rule and parsing errors."""


class FenError(ChessError):
    """Malformed or impossible FEN; message names the offending field."""


class MoveParseError(ChessError):
    """Move text that matches neither UCI nor SAN syntax."""


class AmbiguousMoveError(ChessError):
    """SAN that resolves to more than one legal move."""


class IllegalMoveError(ChessError):
    """A move that is not legal on the given board."""

    def __init__(self, message: str, move: "Move | str | None" = None,
                 fen: str | None = None):
        if move is not None and fen is not None:
            message = f"{message}: {move} on {fen}"
        super().__init__(message)
        self.move = move
        self.fen = fen


class Square(NamedTuple):
    """A board cell addressed by file and rank, both in 0..7."""

    file: int
    rank: int

    @property
    def index(self) -> int:
        return self.rank * 8 + self.file

    @classmethod
    def from_index(cls, index: int) -> "Square":
        return cls(index & 7, index >> 3)

    @classmethod
    def from_name(cls, name: str) -> "Square":
        if len(name) != 2 or name[0] not in "abcdefgh" or name[1] not in "12345678":
            raise MoveParseError(f"bad square name: {name!r}")
        return cls(ord(name[0]) - 97, ord(name[1]) - 49)

    def __str__(self) -> str:
        return chr(97 + self.file) + chr(49 + self.rank)


def square_name(index: int) -> str:
    return chr(97 + (index & 7)) + chr(49 + (index >> 3))


@dataclass(frozen=True)
class Piece:
    """A piece kind plus color; `code` is the signed board cell value."""

    kind: int
    color: int

    @property
    def code(self) -> int:
        return self.kind * self.color

    @property
    def name(self) -> str:
        color = "white" if self.color == WHITE else "black"
        return f"{color}-{PIECE_NAMES[self.kind]}"


class Move:
    """A legal move candidate with flags derived at generation time."""

    __slots__ = ("from_sq", "to_sq", "promotion", "is_capture", "is_en_passant",
                 "is_castle_king", "is_castle_queen", "gives_check")

    def __init__(self, from_sq: int, to_sq: int, promotion: int = 0,
                 is_capture: bool = False, is_en_passant: bool = False,
                 is_castle_king: bool = False, is_castle_queen: bool = False,
                 gives_check: bool = False):
        self.from_sq = from_sq
        self.to_sq = to_sq
        self.promotion = promotion
        self.is_capture = is_capture
        self.is_en_passant = is_en_passant
        self.is_castle_king = is_castle_king
        self.is_castle_queen = is_castle_queen
        self.gives_check = gives_check

    @property
    def from_square(self) -> Square:
        return Square.from_index(self.from_sq)

    @property
    def to_square(self) -> Square:
        return Square.from_index(self.to_sq)

    def key(self) -> tuple[int, int, int]:
        return (self.from_sq, self.to_sq, self.promotion)

    def uci(self) -> str:
        text = square_name(self.from_sq) + square_name(self.to_sq)
        if self.promotion:
            text += "pnbrqk"[self.promotion - 1]
        return text

    def __eq__(self, other) -> bool:
        return isinstance(other, Move) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Move({self.uci()})"


class GameStatus(Enum):
    ONGOING = "ongoing"
    CHECKMATE = "checkmate"
    STALEMATE = "stalemate"
    DRAW_FIFTY_MOVE = "draw_fifty_move"
    DRAW_REPETITION = "draw_repetition"
    DRAW_INSUFFICIENT_MATERIAL = "draw_insufficient_material"


# ---------------------------------------------------------------------------
# Precomputed geometry tables.
# ---------------------------------------------------------------------------

# Direction order: straight (N, S, E, W) then diagonal (NE, NW, SE, SW).
# Straight dirs have index < 4; rook-like sliders use those, bishops the rest.
_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))


def _build_tables():
    knight, king, rays = [], [], []
    for sq in range(64):
        r, f = sq >> 3, sq & 7
        kn = tuple((r + dr) * 8 + (f + df)
                   for dr, df in ((1, 2), (2, 1), (2, -1), (1, -2),
                                  (-1, -2), (-2, -1), (-2, 1), (-1, 2))
                   if 0 <= r + dr < 8 and 0 <= f + df < 8)
        kg = tuple((r + dr) * 8 + (f + df) for dr, df in _DIRS
                   if 0 <= r + dr < 8 and 0 <= f + df < 8)
        ry = []
        for dr, df in _DIRS:
            line = []
            rr, ff = r + dr, f + df
            while 0 <= rr < 8 and 0 <= ff < 8:
                line.append(rr * 8 + ff)
                rr += dr
                ff += df
            ry.append(tuple(line))
        knight.append(kn)
        king.append(kg)
        rays.append(tuple(ry))
    # Pawn attack sources: squares from which a pawn of `color` attacks sq.
    att_from = {WHITE: [], BLACK: []}
    for sq in range(64):
        r, f = sq >> 3, sq & 7
        att_from[WHITE].append(tuple((r - 1) * 8 + (f + df) for df in (-1, 1)
                                     if 0 <= r - 1 and 0 <= f + df < 8))
        att_from[BLACK].append(tuple((r + 1) * 8 + (f + df) for df in (-1, 1)
                                     if r + 1 < 8 and 0 <= f + df < 8))
    # line_dir[a*64+b] = direction index from a to b plus 1, or 0 if unaligned.
    line = bytearray(64 * 64)
    for sq in range(64):
        for d in range(8):
            for t in rays[sq][d]:
                line[sq * 64 + t] = d + 1
    return knight, king, rays, att_from, bytes(line)


_KNIGHT, _KING, _RAYS, _PAWN_ATT_FROM, _LINE = _build_tables()

# Castling-rights mask applied per touched square (AND semantics).
_CASTLE_MASK = [15] * 64
_CASTLE_MASK[0] = 15 ^ CASTLE_WQ
_CASTLE_MASK[7] = 15 ^ CASTLE_WK
_CASTLE_MASK[4] = 15 ^ (CASTLE_WK | CASTLE_WQ)
_CASTLE_MASK[56] = 15 ^ CASTLE_BQ
_CASTLE_MASK[63] = 15 ^ CASTLE_BK
_CASTLE_MASK[60] = 15 ^ (CASTLE_BK | CASTLE_BQ)

# Zobrist keys, deterministic across runs.
_zrng = random.Random(0x5CC0FFEE)
_Z_PIECE = [[_zrng.getrandbits(64) for _ in range(64)] for _ in range(13)]
_Z_CASTLE = [_zrng.getrandbits(64) for _ in range(16)]
_Z_EP_FILE = [_zrng.getrandbits(64) for _ in range(8)]
_Z_SIDE = _zrng.getrandbits(64)


def _piece_zindex(code: int) -> int:
    return code + 6


def _compute_zkey(placement, stm, castling, ep) -> int:
    key = 0
    for sq in range(64):
        p = placement[sq]
        if p:
            key ^= _Z_PIECE[p + 6][sq]
    key ^= _Z_CASTLE[castling]
    if ep >= 0:
        key ^= _Z_EP_FILE[ep & 7]
    if stm == BLACK:
        key ^= _Z_SIDE
    return key


def _slider_hits(code: int, direction: int, color: int) -> bool:
    a = code if color == WHITE else -code
    return a == QUEEN or (a == ROOK and direction < 4) or (a == BISHOP and direction >= 4)


def _attacked(occ, sq: int, by: int, skip: int = -1) -> bool:
    """True if `sq` is attacked by side `by`; `skip` is treated as empty."""
    for t in _KNIGHT[sq]:
        if occ[t] == 2 * by:
            return True
    for t in _PAWN_ATT_FROM[by][sq]:
        if occ[t] == by:
            return True
    for t in _KING[sq]:
        if occ[t] == 6 * by:
            return True
    rays = _RAYS[sq]
    for d in range(8):
        for t in rays[d]:
            if t == skip:
                continue
            p = occ[t]
            if p == 0:
                continue
            if (p > 0) == (by > 0) and _slider_hits(p, d, by):
                return True
            break
    return False


def _apply_to_occ(occ, move: Move, us: int):
    """Mutate `occ` in place; return undo record for `_undo_occ`."""
    f, t = move.from_sq, move.to_sq
    piece = occ[f]
    captured = occ[t]
    undo = (f, t, piece, captured, -1, 0, -1, -1)
    occ[f] = 0
    occ[t] = (move.promotion * us) if move.promotion else piece
    if move.is_en_passant:
        cap_sq = t - 8 * us
        undo = (f, t, piece, captured, cap_sq, occ[cap_sq], -1, -1)
        occ[cap_sq] = 0
    elif move.is_castle_king:
        rf, rt = f + 3, f + 1
        occ[rt] = occ[rf]
        occ[rf] = 0
        undo = (f, t, piece, captured, -1, 0, rf, rt)
    elif move.is_castle_queen:
        rf, rt = f - 4, f - 1
        occ[rt] = occ[rf]
        occ[rf] = 0
        undo = (f, t, piece, captured, -1, 0, rf, rt)
    return undo


def _undo_occ(occ, undo) -> None:
    f, t, piece, captured, cap_sq, cap_piece, rf, rt = undo
    occ[f] = piece
    occ[t] = captured
    if cap_sq >= 0:
        occ[cap_sq] = cap_piece
    if rf >= 0:
        occ[rf] = occ[rt]
        occ[rt] = 0


class Board:
    """Immutable chess position with clocks, rights and repetition count.

    Equality and hashing cover the FEN-visible position (placement, side to
    move, castling rights, en-passant target, clocks); repetition bookkeeping
    is carried alongside but excluded so parse(emit(b)) == b holds.
    """

    __slots__ = ("placement", "stm", "castling", "ep", "halfmove_clock",
                 "fullmove_number", "repetition_count", "_rep_prev",
                 "_rep_counts", "_zkey", "_moves", "_move_keys", "_check")

    def __init__(self, placement, stm, castling, ep, halfmove_clock,
                 fullmove_number, repetition_count=1, rep_prev=0,
                 rep_counts=None, zkey=None):
        self.placement = placement
        self.stm = stm
        self.castling = castling
        self.ep = ep
        self.halfmove_clock = halfmove_clock
        self.fullmove_number = fullmove_number
        self.repetition_count = repetition_count
        self._rep_prev = rep_prev
        self._zkey = zkey if zkey is not None else _compute_zkey(
            placement, stm, castling, ep)
        self._rep_counts = rep_counts if rep_counts is not None else {
            self._zkey: repetition_count}
        self._moves = None
        self._move_keys = None
        self._check = None

    # -- construction -------------------------------------------------------

    @classmethod
    def initial(cls) -> "Board":
        from .notation import parse_fen
        return parse_fen(START_FEN)

    @classmethod
    def from_fen(cls, fen: str) -> "Board":
        from .notation import parse_fen
        return parse_fen(fen)

    def fen(self) -> str:
        from .notation import emit_fen
        return emit_fen(self)

    def validate(self) -> None:
        """Raise FenError if the position violates the structural invariants."""
        for color, label in ((WHITE, "white"), (BLACK, "black")):
            kings = sum(1 for p in self.placement if p == 6 * color)
            if kings != 1:
                raise FenError(
                    f"placement field: expected exactly one {label} king, found {kings}")
        for sq in range(8):
            if abs(self.placement[sq]) == PAWN or abs(self.placement[56 + sq]) == PAWN:
                raise FenError("placement field: pawn on rank 1 or rank 8")
        if self.ep >= 0:
            rank = self.ep >> 3
            want = 5 if self.stm == WHITE else 2
            if rank != want:
                raise FenError(
                    f"en-passant field: square {square_name(self.ep)} not on rank {want + 1}")
        if self.halfmove_clock < 0:
            raise FenError("halfmove field: negative clock")
        if self.fullmove_number < 1:
            raise FenError("fullmove field: must be >= 1")
        # The side that just moved must not still be in check.
        occ = self.placement
        other_king = occ.index(-6 * self.stm)
        if _attacked(occ, other_king, self.stm):
            raise FenError("placement field: side not to move is in check")

    # -- basic queries -------------------------------------------------------

    def piece_at(self, square: int | Square) -> Optional[Piece]:
        idx = square.index if isinstance(square, Square) else square
        code = self.placement[idx]
        if code == 0:
            return None
        return Piece(abs(code), WHITE if code > 0 else BLACK)

    def king_square(self, color: int) -> int:
        return self.placement.index(6 * color)

    def in_check(self) -> bool:
        if self._check is None:
            self._check = _attacked(
                self.placement, self.king_square(self.stm), -self.stm)
        return self._check

    @property
    def position_key(self) -> int:
        return self._zkey

    def __eq__(self, other) -> bool:
        return (isinstance(other, Board)
                and self.placement == other.placement
                and self.stm == other.stm
                and self.castling == other.castling
                and self.ep == other.ep
                and self.halfmove_clock == other.halfmove_clock
                and self.fullmove_number == other.fullmove_number)

    def __hash__(self) -> int:
        return hash((self._zkey, self.halfmove_clock, self.fullmove_number))

    def __repr__(self) -> str:
        return f"Board({self.fen()!r})"

    # -- move generation -----------------------------------------------------

    def legal_moves(self) -> list[Move]:
        if self._moves is None:
            self._moves = _generate_legal(self)
            self._move_keys = {m.key(): m for m in self._moves}
        return self._moves

    def find_move(self, from_sq: int, to_sq: int, promotion: int = 0) -> Optional[Move]:
        self.legal_moves()
        return self._move_keys.get((from_sq, to_sq, promotion))

    def mirrored(self) -> "Board":
        """Color-mirrored position: ranks flipped, colors and rights swapped."""
        placement = [0] * 64
        for sq in range(64):
            placement[sq] = -self.placement[sq ^ 56]
        castling = (((self.castling & 3) << 2) | ((self.castling >> 2) & 3))
        ep = self.ep ^ 56 if self.ep >= 0 else -1
        return Board(placement, -self.stm, castling, ep, self.halfmove_clock,
                     self.fullmove_number, self.repetition_count, self._rep_prev)


def _generate_legal(board: Board) -> list[Move]:
    occ = list(board.placement)
    us = board.stm
    opp = -us
    ksq = occ.index(6 * us)
    ok = occ.index(6 * opp)

    # Checkers on our king, squares that resolve a single check, and pins.
    checkers = []
    block = None
    pins = {}
    for t in _KNIGHT[ksq]:
        if occ[t] == 2 * opp:
            checkers.append(t)
            block = {t}
    for t in _PAWN_ATT_FROM[opp][ksq]:
        if occ[t] == opp:
            checkers.append(t)
            block = {t}
    rays = _RAYS[ksq]
    for d in range(8):
        blocker = -1
        path = []
        for t in rays[d]:
            p = occ[t]
            if p == 0:
                path.append(t)
                continue
            if (p > 0) == (us > 0):
                if blocker < 0:
                    blocker = t
                    path.append(t)
                    continue
                break
            if _slider_hits(p, d, opp):
                path.append(t)
                if blocker < 0:
                    checkers.append(t)
                    block = set(path)
                else:
                    pins[blocker] = frozenset(path)
            break

    moves: list[Move] = []
    in_check = bool(checkers)

    # King steps; the king square itself is vacated for the attack test.
    for t in _KING[ksq]:
        p = occ[t]
        if p != 0 and (p > 0) == (us > 0):
            continue
        if _attacked(occ, t, opp, skip=ksq):
            continue
        moves.append(Move(ksq, t, is_capture=p != 0))

    if not in_check:
        c = board.castling
        if us == WHITE:
            if (c & CASTLE_WK and occ[5] == 0 and occ[6] == 0 and occ[7] == ROOK
                    and not _attacked(occ, 5, opp) and not _attacked(occ, 6, opp)):
                moves.append(Move(4, 6, is_castle_king=True))
            if (c & CASTLE_WQ and occ[3] == 0 and occ[2] == 0 and occ[1] == 0
                    and occ[0] == ROOK and not _attacked(occ, 3, opp)
                    and not _attacked(occ, 2, opp)):
                moves.append(Move(4, 2, is_castle_queen=True))
        else:
            if (c & CASTLE_BK and occ[61] == 0 and occ[62] == 0 and occ[63] == -ROOK
                    and not _attacked(occ, 61, opp) and not _attacked(occ, 62, opp)):
                moves.append(Move(60, 62, is_castle_king=True))
            if (c & CASTLE_BQ and occ[59] == 0 and occ[58] == 0 and occ[57] == 0
                    and occ[56] == -ROOK and not _attacked(occ, 59, opp)
                    and not _attacked(occ, 58, opp)):
                moves.append(Move(60, 58, is_castle_queen=True))

    if len(checkers) < 2:
        allowed = block if in_check else None
        fwd = 8 * us
        promo_rank = 7 if us == WHITE else 0
        start_rank = 1 if us == WHITE else 6
        for s in range(64):
            p = occ[s]
            if p == 0 or (p > 0) != (us > 0) or s == ksq:
                continue
            pin_ray = pins.get(s)
            a = p if us == WHITE else -p
            if a == PAWN:
                r, f = s >> 3, s & 7
                t = s + fwd
                if occ[t] == 0:
                    if ((allowed is None or t in allowed)
                            and (pin_ray is None or t in pin_ray)):
                        if t >> 3 == promo_rank:
                            for kind in (QUEEN, ROOK, BISHOP, KNIGHT):
                                moves.append(Move(s, t, promotion=kind))
                        else:
                            moves.append(Move(s, t))
                    if r == start_rank:
                        t2 = t + fwd
                        if (occ[t2] == 0
                                and (allowed is None or t2 in allowed)
                                and (pin_ray is None or t2 in pin_ray)):
                            moves.append(Move(s, t2))
                for df in (-1, 1):
                    if not 0 <= f + df < 8:
                        continue
                    t = s + fwd + df
                    cap = occ[t]
                    if cap != 0 and (cap > 0) != (us > 0):
                        if ((allowed is None or t in allowed)
                                and (pin_ray is None or t in pin_ray)):
                            if t >> 3 == promo_rank:
                                for kind in (QUEEN, ROOK, BISHOP, KNIGHT):
                                    moves.append(Move(s, t, promotion=kind,
                                                      is_capture=True))
                            else:
                                moves.append(Move(s, t, is_capture=True))
                    elif t == board.ep:
                        # En passant gets a full make/test/unmake: the double
                        # pawn removal can expose lateral or diagonal checks.
                        if allowed is not None and t not in allowed \
                                and (t - fwd) not in checkers:
                            continue
                        m = Move(s, t, is_capture=True, is_en_passant=True)
                        undo = _apply_to_occ(occ, m, us)
                        safe = not _attacked(occ, ksq, opp)
                        _undo_occ(occ, undo)
                        if safe:
                            moves.append(m)
            elif a == KNIGHT:
                for t in _KNIGHT[s]:
                    cap = occ[t]
                    if cap != 0 and (cap > 0) == (us > 0):
                        continue
                    if ((allowed is None or t in allowed)
                            and (pin_ray is None or t in pin_ray)):
                        moves.append(Move(s, t, is_capture=cap != 0))
            else:
                dirs = range(4) if a == ROOK else range(4, 8) if a == BISHOP else range(8)
                sray = _RAYS[s]
                for d in dirs:
                    for t in sray[d]:
                        cap = occ[t]
                        if cap != 0 and (cap > 0) == (us > 0):
                            break
                        if ((allowed is None or t in allowed)
                                and (pin_ray is None or t in pin_ray)):
                            moves.append(Move(s, t, is_capture=cap != 0))
                        if cap != 0:
                            break

    # Derive gives_check: cheap alignment prefilter, exact make/test/unmake.
    line = _LINE
    for m in moves:
        kind = m.promotion or abs(occ[m.from_sq])
        t = m.to_sq
        candidate = m.is_en_passant or m.is_castle_king or m.is_castle_queen
        if not candidate:
            if kind == KNIGHT:
                candidate = ok in _KNIGHT[t]
            elif kind == PAWN:
                candidate = t in _PAWN_ATT_FROM[us][ok]
            elif kind != KING:
                d = line[t * 64 + ok]
                candidate = bool(d) and _slider_hits(kind * us, d - 1, us)
            if not candidate and line[ok * 64 + m.from_sq]:
                candidate = True  # possible discovered check
            if not candidate and m.promotion:
                candidate = bool(line[t * 64 + ok])
        if candidate:
            undo = _apply_to_occ(occ, m, us)
            m.gives_check = _attacked(occ, ok, us)
            _undo_occ(occ, undo)

    moves.sort(key=_move_sort_key)
    return moves


def _move_sort_key(m: Move) -> tuple[int, int, int]:
    return (m.from_sq, m.to_sq, PROMO_SLOT[m.promotion])


def legal_moves(board: Board) -> list[Move]:
    """All legal moves, sorted by (from, to, promotion slot)."""
    return board.legal_moves()


def apply_move(board: Board, move: Move) -> Board:
    """Apply a legal move, returning the successor position.

    The input board is untouched. Raises IllegalMoveError when `move` is not
    among this position's legal moves.
    """
    canonical = board.find_move(move.from_sq, move.to_sq, move.promotion)
    if canonical is None:
        raise IllegalMoveError("illegal move", move.uci(), board.fen())
    move = canonical

    us = board.stm
    placement = list(board.placement)
    f, t = move.from_sq, move.to_sq
    piece = placement[f]
    captured = placement[t]
    zkey = board._zkey

    zkey ^= _Z_PIECE[piece + 6][f]
    placement[f] = 0
    if captured:
        zkey ^= _Z_PIECE[captured + 6][t]
    new_piece = (move.promotion * us) if move.promotion else piece
    placement[t] = new_piece
    zkey ^= _Z_PIECE[new_piece + 6][t]

    if move.is_en_passant:
        cap_sq = t - 8 * us
        zkey ^= _Z_PIECE[placement[cap_sq] + 6][cap_sq]
        placement[cap_sq] = 0
    elif move.is_castle_king:
        rf, rt = f + 3, f + 1
        rook = placement[rf]
        zkey ^= _Z_PIECE[rook + 6][rf] ^ _Z_PIECE[rook + 6][rt]
        placement[rt] = rook
        placement[rf] = 0
    elif move.is_castle_queen:
        rf, rt = f - 4, f - 1
        rook = placement[rf]
        zkey ^= _Z_PIECE[rook + 6][rf] ^ _Z_PIECE[rook + 6][rt]
        placement[rt] = rook
        placement[rf] = 0

    castling = board.castling & _CASTLE_MASK[f] & _CASTLE_MASK[t]
    if castling != board.castling:
        zkey ^= _Z_CASTLE[board.castling] ^ _Z_CASTLE[castling]

    is_pawn = abs(piece) == PAWN
    ep = -1
    if is_pawn and abs(t - f) == 16:
        ep = (f + t) >> 1
    if board.ep >= 0:
        zkey ^= _Z_EP_FILE[board.ep & 7]
    if ep >= 0:
        zkey ^= _Z_EP_FILE[ep & 7]
    zkey ^= _Z_SIDE

    irreversible = is_pawn or move.is_capture
    halfmove = 0 if irreversible else board.halfmove_clock + 1
    fullmove = board.fullmove_number + (1 if us == BLACK else 0)

    # Repetition bookkeeping: positions before an irreversible move (or a
    # castling-rights change) can never recur, so the count table resets.
    if irreversible or castling != board.castling:
        rep = 1
        counts = {zkey: 1}
    else:
        counts = dict(board._rep_counts)
        rep = counts.get(zkey, 0) + 1
        counts[zkey] = rep

    return Board(placement, -us, castling, ep, halfmove, fullmove,
                 repetition_count=rep, rep_prev=board.repetition_count,
                 rep_counts=counts, zkey=zkey)


def _insufficient_material(placement) -> bool:
    minors = []
    for sq in range(64):
        p = placement[sq]
        if p == 0:
            continue
        a = abs(p)
        if a == KING:
            continue
        if a in (PAWN, ROOK, QUEEN):
            return False
        minors.append((p, sq))
    if len(minors) <= 1:
        return True  # K vs K, or K + minor vs K
    if len(minors) == 2:
        (p1, s1), (p2, s2) = minors
        if abs(p1) == BISHOP and abs(p2) == BISHOP and (p1 > 0) != (p2 > 0):
            shade1 = ((s1 >> 3) + (s1 & 7)) & 1
            shade2 = ((s2 >> 3) + (s2 & 7)) & 1
            return shade1 == shade2
    return False


def game_status(board: Board) -> GameStatus:
    """Terminal classification; mate/stalemate take precedence over draws."""
    if not board.legal_moves():
        return GameStatus.CHECKMATE if board.in_check() else GameStatus.STALEMATE
    if board.halfmove_clock >= 100:
        return GameStatus.DRAW_FIFTY_MOVE
    if board.repetition_count >= 3:
        return GameStatus.DRAW_REPETITION
    if _insufficient_material(board.placement):
        return GameStatus.DRAW_INSUFFICIENT_MATERIAL
    return GameStatus.ONGOING


def perft(board: Board, depth: int) -> int:
    """Count legal game-tree leaves at exactly `depth` plies."""
    if depth <= 0:
        return 1
    moves = board.legal_moves()
    if depth == 1:
        return len(moves)
    return sum(perft(apply_move(board, m), depth - 1) for m in moves)
