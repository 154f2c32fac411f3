"""Corpus ingestion: expert games to engine tuples, TSV to commentary records."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ..chess import Board, ChessError, Move, apply_move, parse_fen, parse_move_text
from ..commentary.categories import CommentCategory, CommentarySample
from ..engine import TrainingTuple
from .pgn import PGNGame
from .vocab import EOS_ID, Vocabulary

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")

# Aligned commentary rows: game id, FEN before the move, UCI move, category
# label, free-text comment.
TSV_COLUMNS = 5


def tokenize_comment(text: str) -> list[str]:
    """Lowercase, split punctuation into separate tokens."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class ExtractStats:
    kept_games: int = 0
    excluded_rating: int = 0
    excluded_missing_rating: int = 0
    excluded_unfinished: int = 0


def extract_engine_tuples(games: Iterable[PGNGame], min_rating: int = 2000
                          ) -> tuple[list[TrainingTuple], ExtractStats]:
    """Replay rating-filtered decisive/drawn games into per-ply tuples.

    Outcomes are mapped to each mover's perspective: a White win labels White
    movers 1 and Black movers 0; draws label every mover 0.5.
    """
    tuples: list[TrainingTuple] = []
    stats = ExtractStats()
    for game in games:
        try:
            white = int(game.tags["WhiteElo"])
            black = int(game.tags["BlackElo"])
        except (KeyError, ValueError):
            stats.excluded_missing_rating += 1
            continue
        if white < min_rating or black < min_rating:
            stats.excluded_rating += 1
            continue
        result = game.result
        if result == "*":
            stats.excluded_unfinished += 1
            continue
        white_score = {"1-0": 1.0, "0-1": 0.0, "1/2-1/2": 0.5}[result]
        board = Board.initial()
        for san_text in game.sans:
            move = parse_move_text(board, san_text)
            outcome = white_score if board.stm == 1 else 1.0 - white_score
            tuples.append(TrainingTuple(board, move, outcome))
            board = apply_move(board, move)
        stats.kept_games += 1
    return tuples, stats


@dataclass
class RawCommentaryRecord:
    """A parsed commentary row before vocabulary encoding."""

    game_id: str
    board: Board
    move: Move
    category: CommentCategory
    words: tuple[str, ...]
    text: str


@dataclass
class SkipRecord:
    line: int
    reason: str


@dataclass
class LoadResult:
    records: list[RawCommentaryRecord]
    skipped: list[SkipRecord]
    general_skipped: int = 0


def load_commentary_dataset(source: str | Path | Iterable[str]) -> LoadResult:
    """Parse the aligned TSV; rows failing validation are skipped with reasons."""
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]
    result = LoadResult(records=[], skipped=[])
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != TSV_COLUMNS:
            result.skipped.append(SkipRecord(
                lineno, f"expected {TSV_COLUMNS} tab-separated fields, "
                        f"got {len(parts)}"))
            continue
        game_id, fen, uci, label, text = parts
        label = label.strip().lower()
        if label == "general":
            result.general_skipped += 1
            continue
        try:
            category = CommentCategory(label)
        except ValueError:
            result.skipped.append(SkipRecord(lineno, f"unknown category {label!r}"))
            continue
        try:
            board = parse_fen(fen)
            move = parse_move_text(board, uci.strip())
        except ChessError as exc:
            result.skipped.append(SkipRecord(lineno, str(exc)))
            continue
        words = tuple(tokenize_comment(text))
        if not words:
            result.skipped.append(SkipRecord(lineno, "empty comment"))
            continue
        result.records.append(RawCommentaryRecord(
            game_id=game_id.strip(), board=board, move=move,
            category=category, words=words, text=text))
    return result


def encode_records(records: Iterable[RawCommentaryRecord],
                   vocab: Vocabulary) -> list[CommentarySample]:
    """Finalize raw records into id-encoded samples with the end marker."""
    samples = []
    for r in records:
        tokens = tuple(vocab.encode(r.words)) + (EOS_ID,)
        samples.append(CommentarySample(
            board=r.board, move=r.move, category=r.category, tokens=tokens,
            game_id=r.game_id, text=r.text))
    return samples
