"""Shared fixtures for commentary-level tests: tiny bundles and corpora."""

import numpy as np

from scc.chess import Board, apply_move, parse_move_text
from scc.commentary import (CommentaryConfig, CommentCategory,
                            CommentarySample, ModelBundle)
from scc.data import EOS_ID, Vocabulary
from scc.engine import EngineConfig

TINY_ENGINE = EngineConfig(channels=4, conv_layers=2, state_dim=8)

WORDS = ["white", "black", "pawn", "knight", "takes", "center", "good",
         "bad", "plan", "attack", "defend", "king", "queen", "rook",
         "opens", "line", "!", ".", "the", "a"]


def play(board, *texts):
    for t in texts:
        board = apply_move(board, parse_move_text(board, t))
    return board


def tiny_vocab():
    return Vocabulary(WORDS)


def tiny_config(horizon=3):
    return CommentaryConfig(d=8, decoder_hidden=10, embed_dim=6,
                            move_embed_dim=5, horizon=horizon,
                            engine=TINY_ENGINE)


def tiny_bundle(mode="mult", seed=0, horizon=3, vocab=None,
                categories=None):
    vocab = vocab or tiny_vocab()
    return ModelBundle.create(mode, vocab, tiny_config(horizon),
                              categories=categories, seed=seed)


def randomize(bundle, seed=0, scale=0.2):
    """Perturb all parameters so outputs are non-degenerate."""
    rng = np.random.default_rng(seed)
    for p in bundle.all_parameters():
        p.data += rng.normal(0, scale, size=p.data.shape)
    return bundle


def make_sample(vocab, board, move_text, category, words, game_id="g0"):
    move = parse_move_text(board, move_text)
    tokens = tuple(vocab.encode(words)) + (EOS_ID,)
    return CommentarySample(board=board, move=move, category=category,
                            tokens=tokens, game_id=game_id,
                            text=" ".join(words))


def toy_corpus(vocab, category, n=8, seed=0, words_per_comment=4):
    """Distinct (board, move) -> short comment pairs for memorization.

    Positions come from one deterministic playout so every sample has a
    different input; targets are random word strings.
    """
    from scc.chess import GameStatus, game_status

    rng = np.random.default_rng(seed)
    samples = []
    board = Board.initial()
    i = 0
    while len(samples) < n:
        moves = board.legal_moves()
        if not moves or game_status(board) is not GameStatus.ONGOING:
            board = Board.initial()
            moves = board.legal_moves()
        move = moves[int(rng.integers(len(moves)))]
        words = [WORDS[int(rng.integers(len(WORDS)))]
                 for _ in range(words_per_comment)]
        samples.append(make_sample(vocab, board, move.uci(), category, words,
                                   game_id=f"g{i}"))
        board = apply_move(board, move)
        i += 1
    return samples


def synthetic_pgn(n_games=4, seed=0, max_plies=30, min_elo=2100,
                  results=None):
    """Random-playout PGN text with rating tags, for pipeline tests."""
    import random as pyrandom
    from scc.chess import GameStatus, game_status, san

    rng = pyrandom.Random(seed)
    chunks = []
    for g in range(n_games):
        board = Board.initial()
        sans = []
        for _ in range(max_plies):
            moves = board.legal_moves()
            if not moves or game_status(board) is not GameStatus.ONGOING:
                break
            move = rng.choice(moves)
            sans.append(san(board, move))
            board = apply_move(board, move)
        status = game_status(board)
        if results is not None:
            result = results[g % len(results)]
        elif status is GameStatus.CHECKMATE:
            result = "1-0" if board.stm == -1 else "0-1"
        else:
            result = "1/2-1/2"
        white = min_elo + rng.randrange(0, 400)
        black = min_elo + rng.randrange(0, 400)
        tags = [f'[Event "synthetic"]', f'[Round "{g + 1}"]',
                f'[WhiteElo "{white}"]', f'[BlackElo "{black}"]',
                f'[Result "{result}"]']
        body = []
        for ply, text in enumerate(sans):
            if ply % 2 == 0:
                body.append(f"{ply // 2 + 1}.")
            body.append(text)
        body.append(result)
        chunks.append("\n".join(tags) + "\n\n" + " ".join(body) + "\n")
    return "\n".join(chunks)


def synthetic_commentary_tsv(n_games=6, rows_per_game=3, seed=0):
    """TSV rows aligned to random positions, cycling the five categories."""
    import random as pyrandom
    from scc.chess import GameStatus, game_status

    rng = pyrandom.Random(seed)
    cats = [c.value for c in CommentCategory] + ["general"]
    phrases = ["A great move!", "This opens the center.",
               "Better was the other capture.", "White plans a kingside attack",
               "Black is slightly worse here.", "Development, simple chess."]
    lines = []
    for g in range(n_games):
        board = Board.initial()
        for r in range(rows_per_game):
            for _ in range(rng.randrange(0, 4)):
                moves = board.legal_moves()
                if not moves or game_status(board) is not GameStatus.ONGOING:
                    break
                board = apply_move(board, rng.choice(moves))
            moves = board.legal_moves()
            if not moves or game_status(board) is not GameStatus.ONGOING:
                break
            move = rng.choice(moves)
            cat = cats[(g * rows_per_game + r) % len(cats)]
            text = phrases[rng.randrange(len(phrases))]
            lines.append("\t".join([f"game-{g}", board.fen(), move.uci(),
                                    cat, text]))
            board = apply_move(board, move)
    return "\n".join(lines) + "\n"
