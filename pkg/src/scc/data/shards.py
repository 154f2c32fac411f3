"""Binary engine-tuple shards: little-endian, versioned, byte-deterministic.

Layout: magic "SCCT", uint32 version, uint32 record count, then per record a
uint16 length-prefixed FEN, a uint8 length-prefixed UCI move, and a uint8
outcome code (0, 1, 2 for mover scores 0, 0.5, 1).
"""

from __future__ import annotations

import struct
from pathlib import Path

from ..chess import parse_fen, parse_move_text
from ..engine import TrainingTuple

MAGIC = b"SCCT"
VERSION = 1

_OUTCOME_CODE = {0.0: 0, 0.5: 1, 1.0: 2}
_CODE_OUTCOME = {v: k for k, v in _OUTCOME_CODE.items()}


class ShardError(ValueError):
    pass


def write_tuple_shard(path: str | Path, tuples: list[TrainingTuple]) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(tuples)))
        for t in tuples:
            fen = t.board.fen().encode("utf-8")
            uci = t.move.uci().encode("ascii")
            fh.write(struct.pack("<H", len(fen)))
            fh.write(fen)
            fh.write(struct.pack("<B", len(uci)))
            fh.write(uci)
            fh.write(struct.pack("<B", _OUTCOME_CODE[t.outcome]))


def read_tuple_shard(path: str | Path) -> list[TrainingTuple]:
    blob = Path(path).read_bytes()
    if blob[:4] != MAGIC:
        raise ShardError(f"{path}: not a tuple shard (bad magic)")
    version, count = struct.unpack_from("<II", blob, 4)
    if version > VERSION:
        raise ShardError(f"{path}: unsupported shard version {version}")
    offset = 12
    tuples = []
    for _ in range(count):
        (fen_len,) = struct.unpack_from("<H", blob, offset)
        offset += 2
        fen = blob[offset:offset + fen_len].decode("utf-8")
        offset += fen_len
        (uci_len,) = struct.unpack_from("<B", blob, offset)
        offset += 1
        uci = blob[offset:offset + uci_len].decode("ascii")
        offset += uci_len
        (code,) = struct.unpack_from("<B", blob, offset)
        offset += 1
        board = parse_fen(fen)
        tuples.append(TrainingTuple(board, parse_move_text(board, uci),
                                    _CODE_OUTCOME[code]))
    return tuples
