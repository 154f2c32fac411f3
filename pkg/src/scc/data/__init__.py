"""Data pipeline: PGN/TSV ingestion, vocabularies, splits and shards."""

from .vocab import (BOS_ID, EOS_ID, N_SPECIALS, PAD_ID, SPECIAL_TOKENS,
                    UNK_ID, Vocabulary, build_vocab)
from .splits import (DatasetSplit, read_split_manifest, split_by_game,
                     write_split_manifest)
from .shards import ShardError, read_tuple_shard, write_tuple_shard
from .pgn import PGNGame, RejectRecord, parse_pgn
from .ingest import (ExtractStats, LoadResult, RawCommentaryRecord,
                     SkipRecord, encode_records, extract_engine_tuples,
                     load_commentary_dataset, tokenize_comment)
from .convert import convert_csv_file, convert_rows, csv_adapter

__all__ = [
    "PAD_ID", "BOS_ID", "EOS_ID", "UNK_ID", "N_SPECIALS", "SPECIAL_TOKENS",
    "Vocabulary", "build_vocab", "DatasetSplit", "split_by_game",
    "write_split_manifest", "read_split_manifest", "ShardError",
    "write_tuple_shard", "read_tuple_shard", "PGNGame", "RejectRecord",
    "parse_pgn", "ExtractStats", "LoadResult", "RawCommentaryRecord",
    "SkipRecord", "encode_records", "extract_engine_tuples",
    "load_commentary_dataset", "tokenize_comment", "convert_csv_file",
    "convert_rows", "csv_adapter",
]
