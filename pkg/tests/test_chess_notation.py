"""UCI and SAN parsing/rendering against the legal-move set."""

import random

import pytest

from scc.chess import (AmbiguousMoveError, Board, IllegalMoveError,
                       MoveParseError, apply_move, game_status, GameStatus,
                       parse_fen, parse_move_text, parse_san, parse_uci, san)


class TestUci:
    def test_simple(self):
        m = parse_move_text(Board.initial(), "e2e4")
        assert str(m.from_square) == "e2" and str(m.to_square) == "e4"

    def test_promotion_suffix(self):
        b = parse_fen("8/P6k/8/8/8/8/8/K7 w - - 0 1")
        m = parse_uci(b, "a7a8q")
        assert m.promotion == 5

    def test_illegal(self):
        with pytest.raises(IllegalMoveError):
            parse_move_text(Board.initial(), "e2e5")

    def test_unparseable(self):
        with pytest.raises(MoveParseError):
            parse_uci(Board.initial(), "zz9")


class TestSan:
    def test_knight_move(self):
        m = parse_move_text(Board.initial(), "Nf3")
        assert m.uci() == "g1f3"

    def test_castle(self):
        b = Board.initial()
        for t in ("e2e4", "e7e5", "g1f3", "b8c6", "f1c4", "f8c5"):
            b = apply_move(b, parse_move_text(b, t))
        m = parse_san(b, "O-O")
        assert m.is_castle_king and m.uci() == "e1g1"

    def test_pawn_capture_with_check_suffix(self):
        b = parse_fen("4k3/8/8/3p4/4P3/8/8/4K2R w K - 0 1")
        m = parse_san(b, "exd5")
        assert m.is_capture and m.uci() == "e4d5"

    def test_ambiguous_rejected(self):
        b = parse_fen("k7/8/8/8/8/8/8/N1N4K w - - 0 1")
        with pytest.raises(AmbiguousMoveError):
            parse_san(b, "Nb3")
        assert parse_san(b, "Nab3").uci() == "a1b3"
        assert parse_san(b, "Ncb3").uci() == "c1b3"

    def test_nonsense_text(self):
        with pytest.raises(MoveParseError):
            parse_move_text(Board.initial(), "hello")

    def test_no_match(self):
        with pytest.raises(IllegalMoveError):
            parse_san(Board.initial(), "Ne5")

    def test_mate_suffix(self):
        b = Board.initial()
        for t in ("f2f3", "e7e5", "g2g4"):
            b = apply_move(b, parse_move_text(b, t))
        mate = parse_move_text(b, "d8h4")
        assert san(b, mate) == "Qh4#"

    def test_promotion_render(self):
        b = parse_fen("8/P6k/8/8/8/8/8/K7 w - - 0 1")
        m = parse_uci(b, "a7a8q")
        assert san(b, m) == "a8=Q"


def test_san_roundtrip_over_random_playouts():
    rng = random.Random(11)
    for _ in range(12):
        b = Board.initial()
        for _ in range(60):
            moves = b.legal_moves()
            if not moves or game_status(b) is not GameStatus.ONGOING:
                break
            for m in moves:
                assert parse_san(b, san(b, m)) == m
            b = apply_move(b, rng.choice(moves))


def test_gives_check_flag_matches_oracle():
    rng = random.Random(5)
    for _ in range(15):
        b = Board.initial()
        for _ in range(50):
            moves = b.legal_moves()
            if not moves:
                break
            for m in moves:
                child = apply_move(b, m)
                assert m.gives_check == child.in_check(), (b.fen(), m.uci())
            b = apply_move(b, rng.choice(moves))
