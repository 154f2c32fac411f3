"""PGN parsing: tag pairs plus SAN movetext, validated by full replay.

Comments ({...} and ;-to-eol), nested variations, NAGs and move numbers are
skipped. Games whose movetext fails to replay are rejected individually with
a reason; the rest of the stream still parses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from ..chess import Board, ChessError, apply_move, parse_san

_TAG_RE = re.compile(r'^\[(\w+)\s+"(.*)"\]\s*$')
_RESULTS = ("1-0", "0-1", "1/2-1/2", "*")
_MOVE_NUMBER_RE = re.compile(r"^\d+\.*$")


@dataclass
class PGNGame:
    tags: dict[str, str]
    sans: list[str]
    game_id: str = ""

    @property
    def result(self) -> str:
        return self.tags.get("Result", "*")


@dataclass
class RejectRecord:
    game_id: str
    reason: str


def _strip_movetext(text: str) -> list[str]:
    """Drop comments/variations/NAGs, keep SAN and result tokens."""
    out = []
    depth = 0
    i = 0
    buf = []
    while i < len(text):
        ch = text[i]
        if ch == "{":
            end = text.find("}", i + 1)
            i = len(text) if end < 0 else end + 1
            buf.append(" ")
            continue
        if ch == ";":
            end = text.find("\n", i + 1)
            i = len(text) if end < 0 else end + 1
            buf.append(" ")
            continue
        if ch == "(":
            depth += 1
            i += 1
            continue
        if ch == ")":
            depth = max(0, depth - 1)
            i += 1
            continue
        if depth == 0:
            buf.append(ch)
        i += 1
    for token in "".join(buf).split():
        if token.startswith("$") or _MOVE_NUMBER_RE.match(token):
            continue
        out.append(token)
    return out


def _split_games(text: str) -> list[tuple[dict[str, str], str]]:
    games: list[tuple[dict[str, str], str]] = []
    tags: dict[str, str] = {}
    movetext: list[str] = []
    for line in text.splitlines():
        m = _TAG_RE.match(line.strip())
        if m:
            if movetext and any(t.strip() for t in movetext):
                games.append((tags, "\n".join(movetext)))
                tags, movetext = {}, []
            tags[m.group(1)] = m.group(2)
        else:
            movetext.append(line)
    if tags or any(t.strip() for t in movetext):
        games.append((tags, "\n".join(movetext)))
    return games


def parse_pgn(source: str | Iterable[str]) -> tuple[list[PGNGame], list[RejectRecord]]:
    """Parse concatenated PGN games; invalid games are rejected, not fatal."""
    text = source if isinstance(source, str) else "".join(source)
    games: list[PGNGame] = []
    rejects: list[RejectRecord] = []
    for index, (tags, movetext) in enumerate(_split_games(text)):
        game_id = tags.get("GameId") or f"pgn-{index}"
        tokens = _strip_movetext(movetext)
        sans = []
        result_token = None
        for tok in tokens:
            if tok in _RESULTS:
                result_token = tok
                break
            sans.append(tok)
        if "Result" not in tags and result_token:
            tags = dict(tags)
            tags["Result"] = result_token
        if tags.get("Result", "*") not in _RESULTS:
            rejects.append(RejectRecord(game_id, f"bad result tag {tags.get('Result')!r}"))
            continue
        board = Board.initial()
        ok = True
        for ply, san_text in enumerate(sans):
            try:
                board = apply_move(board, parse_san(board, san_text))
            except ChessError as exc:
                rejects.append(RejectRecord(
                    game_id, f"ply {ply + 1} ({san_text!r}): {exc}"))
                ok = False
                break
        if not ok:
            continue
        if not sans and not tags:
            continue  # stray whitespace block
        games.append(PGNGame(tags=tags, sans=sans, game_id=game_id))
    return games, rejects
