"""PGN/TSV ingestion, vocabulary, splits and shard determinism."""

import numpy as np
import pytest

from scc.data import (BOS_ID, EOS_ID, PAD_ID, UNK_ID, Vocabulary, build_vocab,
                      encode_records, extract_engine_tuples,
                      load_commentary_dataset, parse_pgn, read_tuple_shard,
                      split_by_game, tokenize_comment, write_split_manifest,
                      write_tuple_shard)

from helpers import synthetic_commentary_tsv, synthetic_pgn

TWO_GAMES = """\
[Event "t"]
[WhiteElo "2200"]
[BlackElo "2300"]
[Result "1-0"]

1. e4 e5 2. Nf3 {a comment} Nc6 (2... d6 3. d4) 3. Bb5 $1 a6 1-0

[Event "t2"]
[WhiteElo "2107"]
[BlackElo "2050"]
[Result "1/2-1/2"]

1. d4 d5 1/2-1/2
"""


class TestParsePgn:
    def test_two_games(self):
        games, rejects = parse_pgn(TWO_GAMES)
        assert len(games) == 2 and not rejects
        assert games[0].sans == ["e4", "e5", "Nf3", "Nc6", "Bb5", "a6"]
        assert games[1].result == "1/2-1/2"

    def test_four_sans(self):
        games, _ = parse_pgn('[Result "*"]\n\n1. e4 e5 2. Nf3 *\n')
        assert games[0].sans == ["e4", "e5", "Nf3"]

    def test_illegal_san_rejects_only_that_game(self):
        text = TWO_GAMES.replace("3. Bb5 $1 a6", "3. Bb9 a6")
        games, rejects = parse_pgn(text)
        assert len(games) == 1
        assert len(rejects) == 1
        assert "Bb9" in rejects[0].reason

    def test_comments_variations_nags_skipped(self):
        text = ('[Result "*"]\n\n'
                '1. e4 {deep (nested) stuff} e5 ; eol comment\n'
                '2. Nf3 (2. f4 exf4 (3... d5)) Nc6 $14 *\n')
        games, rejects = parse_pgn(text)
        assert not rejects
        assert games[0].sans == ["e4", "e5", "Nf3", "Nc6"]

    def test_synthetic_roundtrip(self):
        games, rejects = parse_pgn(synthetic_pgn(6, seed=3))
        assert len(games) == 6 and not rejects


class TestExtractTuples:
    def test_rating_threshold(self):
        text = TWO_GAMES.replace('[WhiteElo "2200"]', '[WhiteElo "1999"]')
        games, _ = parse_pgn(text)
        tuples, stats = extract_engine_tuples(games)
        assert stats.excluded_rating == 1
        assert stats.kept_games == 1

    def test_decisive_game_labeling(self):
        games, _ = parse_pgn(TWO_GAMES)
        tuples, _ = extract_engine_tuples([games[0]])
        assert len(tuples) == 6
        whites = [t for t in tuples if t.board.stm == 1]
        blacks = [t for t in tuples if t.board.stm == -1]
        assert all(t.outcome == 1.0 for t in whites) and len(whites) == 3
        assert all(t.outcome == 0.0 for t in blacks) and len(blacks) == 3

    def test_draw_labels_half(self):
        games, _ = parse_pgn(TWO_GAMES)
        tuples, _ = extract_engine_tuples([games[1]])
        assert all(t.outcome == 0.5 for t in tuples)

    def test_unfinished_and_missing_elo_excluded(self):
        text = ('[Result "*"]\n[WhiteElo "2500"]\n[BlackElo "2500"]\n\n1. e4 *\n'
                '\n[Result "1-0"]\n\n1. d4 1-0\n')
        games, _ = parse_pgn(text)
        tuples, stats = extract_engine_tuples(games)
        assert not tuples
        assert stats.excluded_unfinished == 1
        assert stats.excluded_missing_rating == 1

    def test_tuple_count_equals_plies(self):
        games, _ = parse_pgn(synthetic_pgn(5, seed=9))
        finished = [g for g in games if g.result != "*"]
        tuples, stats = extract_engine_tuples(finished, min_rating=2000)
        expected = sum(len(g.sans) for g in finished)
        assert len(tuples) == expected


class TestCommentaryLoading:
    def test_tokenization(self):
        assert tokenize_comment("A great move!") == ["a", "great", "move", "!"]
        assert tokenize_comment("Nxe5!? wins, probably...") == \
            ["nxe5", "!", "?", "wins", ",", "probably", ".", ".", "."]

    def test_general_rows_skipped_and_counted(self):
        tsv = synthetic_commentary_tsv(6, 3, seed=1)
        result = load_commentary_dataset(tsv.splitlines())
        assert result.general_skipped > 0
        assert all(r.category.value != "general" for r in result.records)

    def test_illegal_move_rejected_with_reason(self):
        lines = ["g0\t" + "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"
                 + "\te2e5\tquality\tnice"]
        result = load_commentary_dataset(lines)
        assert not result.records
        assert len(result.skipped) == 1
        assert "illegal" in result.skipped[0].reason

    def test_bad_fen_rejected(self):
        lines = ["g0\tnot a fen\te2e4\tquality\tnice"]
        result = load_commentary_dataset(lines)
        assert not result.records and len(result.skipped) == 1

    def test_encode_records_appends_eos(self):
        tsv = synthetic_commentary_tsv(3, 2, seed=2)
        result = load_commentary_dataset(tsv.splitlines())
        vocab = build_vocab([r.words for r in result.records], min_frequency=1)
        samples = encode_records(result.records, vocab)
        assert all(s.tokens[-1] == EOS_ID for s in samples)
        assert all(t != PAD_ID for s in samples for t in s.tokens)


class TestVocabulary:
    def test_min_frequency_and_unk(self):
        vocab = build_vocab([["a", "a", "b"]], min_frequency=2)
        assert vocab.tokens == ["a"]
        assert vocab.token_id("b") == UNK_ID

    def test_frequency_rank_ties_lexicographic(self):
        vocab = build_vocab([["b", "a", "b", "a", "c"]], min_frequency=1)
        assert vocab.tokens == ["a", "b", "c"]

    def test_ids_contiguous_with_specials(self):
        vocab = build_vocab([["x", "y", "x"]], min_frequency=1)
        assert vocab.token_id("x") == 4
        assert vocab.token_id("y") == 5
        assert len(vocab) == 6

    def test_max_size(self):
        seqs = [[f"w{i}" for i in range(100)]]
        vocab = build_vocab(seqs, min_frequency=1, max_size=10)
        assert len(vocab) == 14

    def test_save_load_byte_identical(self, tmp_path):
        vocab = build_vocab([["one", "two", "two"]], min_frequency=1)
        vocab.save(tmp_path / "a.txt")
        vocab.save(tmp_path / "b.txt")
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
        loaded = Vocabulary.load(tmp_path / "a.txt")
        assert loaded.tokens == vocab.tokens
        assert loaded.min_frequency == vocab.min_frequency

    def test_roundtrip_encode_decode(self):
        vocab = build_vocab([["hello", "world"]], min_frequency=1)
        ids = vocab.encode(["hello", "world", "missing"])
        assert ids == [vocab.token_id("hello"), vocab.token_id("world"), UNK_ID]
        assert vocab.decode([BOS_ID] + ids[:2] + [EOS_ID]) == ["hello", "world"]


class _Rec:
    def __init__(self, gid):
        self.game_id = gid


class TestSplits:
    def test_ten_games_split_7_1_2(self):
        records = [_Rec(f"g{i % 10}") for i in range(40)]
        split = split_by_game(records, seed=0)
        names = set(split.assignment.values())
        counts = {n: sum(1 for v in split.assignment.values() if v == n)
                  for n in names}
        assert counts == {"train": 7, "valid": 1, "test": 2}

    def test_hundred_games(self):
        records = [_Rec(f"g{i}") for i in range(100)]
        split = split_by_game(records, seed=1)
        counts = [sum(1 for v in split.assignment.values() if v == n)
                  for n in ("train", "valid", "test")]
        assert counts == [70, 10, 20]

    def test_no_game_in_two_splits(self):
        records = [_Rec(f"g{i % 10}") for i in range(50)]
        split = split_by_game(records, seed=2)
        for bucket, name in ((split.train, "train"), (split.valid, "valid"),
                             (split.test, "test")):
            for r in bucket:
                assert split.assignment[r.game_id] == name

    def test_same_seed_same_split(self):
        records = [_Rec(f"g{i}") for i in range(30)]
        a = split_by_game(records, seed=7)
        b = split_by_game(records, seed=7)
        assert a.assignment == b.assignment
        c = split_by_game(records, seed=8)
        assert a.assignment != c.assignment

    def test_manifest_deterministic(self, tmp_path):
        records = [_Rec(f"g{i}") for i in range(10)]
        split = split_by_game(records, seed=3)
        write_split_manifest(tmp_path / "a.tsv", split.assignment)
        write_split_manifest(tmp_path / "b.tsv", split.assignment)
        assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()


class TestConverter:
    def test_csv_to_tsv(self, tmp_path):
        from scc.data import convert_csv_file, csv_adapter

        src = tmp_path / "upstream.csv"
        src.write_text(
            "id,pos,mv,cat,comment\n"
            'g1,rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1,'
            'e2e4,description,"A solid start"\n',
            encoding="utf-8")
        dest = tmp_path / "commentary.tsv"
        n = convert_csv_file(src, dest, csv_adapter(0, 1, 2, 3, 4),
                             skip_header=True)
        assert n == 1
        result = load_commentary_dataset(dest)
        assert len(result.records) == 1
        assert result.records[0].words == ("a", "solid", "start")

    def test_adapter_drops_short_rows(self):
        from scc.data import convert_rows, csv_adapter

        lines = list(convert_rows([["only", "two"]], csv_adapter(0, 1, 2, 3, 4)))
        assert lines == []

    def test_fields_flattened(self):
        from scc.data import convert_rows, csv_adapter

        row = ["g", "fen", "e2e4", "quality", "line\nbreak\tand tab"]
        line = next(iter(convert_rows([row], csv_adapter(0, 1, 2, 3, 4))))
        assert line.count("\t") == 4
        assert "\n" not in line


class TestShards:
    def test_roundtrip_and_determinism(self, tmp_path):
        games, _ = parse_pgn(synthetic_pgn(3, seed=5))
        tuples, _ = extract_engine_tuples(games, min_rating=2000)
        assert tuples
        write_tuple_shard(tmp_path / "a.bin", tuples)
        write_tuple_shard(tmp_path / "b.bin", tuples)
        assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()
        loaded = read_tuple_shard(tmp_path / "a.bin")
        assert len(loaded) == len(tuples)
        for a, b in zip(loaded, tuples):
            assert a.board == b.board
            assert a.move == b.move
            assert a.outcome == b.outcome

    def test_bad_magic(self, tmp_path):
        (tmp_path / "x.bin").write_bytes(b"JUNKJUNKJUNK")
        with pytest.raises(Exception, match="magic"):
            read_tuple_shard(tmp_path / "x.bin")


def test_pipeline_end_to_end_deterministic(tmp_path):
    """Same seed and input bytes give byte-identical artifacts."""
    pgn_text = synthetic_pgn(6, seed=11)
    tsv_text = synthetic_commentary_tsv(8, 3, seed=11)

    def run(outdir):
        outdir.mkdir()
        games, _ = parse_pgn(pgn_text)
        tuples, _ = extract_engine_tuples(games, min_rating=2000)
        write_tuple_shard(outdir / "tuples.bin", tuples)
        loaded = load_commentary_dataset(tsv_text.splitlines())
        split = split_by_game(loaded.records, seed=4)
        write_split_manifest(outdir / "split.tsv", split.assignment)
        vocab = build_vocab([r.words for r in split.train], min_frequency=1)
        vocab.save(outdir / "vocab.txt")

    run(tmp_path / "run1")
    run(tmp_path / "run2")
    for name in ("tuples.bin", "split.tsv", "vocab.txt"):
        assert (tmp_path / "run1" / name).read_bytes() == \
               (tmp_path / "run2" / name).read_bytes(), name
