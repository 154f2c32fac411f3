"""Self-play data generation, deterministic rollouts and strength gating."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..chess import (BLACK, WHITE, Board, GameStatus, Move, apply_move,
                     game_status, san)
from .loss import TrainingTuple
from .network import EngineNet


@dataclass
class SelfPlayConfig:
    max_plies: int = 300          # hitting the cap scores as a draw
    temperature_plies: int = 10   # sample from the policy for this many plies
    seed: int = 0


@dataclass
class GameRecord:
    moves: list[Move]
    san_moves: list[str]
    result: str                  # "1-0", "0-1" or "1/2-1/2"
    seed: int
    final_status: GameStatus


@dataclass
class SelfPlayResult:
    tuples: list[TrainingTuple]
    games: list[GameRecord]


@dataclass
class GatingReport:
    games: int
    wins: int
    draws: int
    losses: int
    threshold: float
    candidate_score: float = field(init=False)
    accepted: bool = field(init=False)

    def __post_init__(self):
        self.candidate_score = self.wins + 0.5 * self.draws
        self.accepted = self.candidate_score / self.games > self.threshold


def match_report(wins: int, draws: int, losses: int,
                 threshold: float = 0.55) -> GatingReport:
    return GatingReport(games=wins + draws + losses, wins=wins, draws=draws,
                        losses=losses, threshold=threshold)


def _argmax_move(net: EngineNet, board: Board, cache: dict | None = None) -> Move:
    """Deterministic best policy move; ties break toward the lowest move key."""
    if cache is not None:
        key = (board.position_key, board.halfmove_clock, board.fullmove_number,
               board.repetition_count, board._rep_prev)
        hit = cache.get(key)
        if hit is not None:
            return hit
    ev = net.evaluate(board)
    move = ev.legal_moves[int(np.argmax(ev.policy[ev.legal_indices]))]
    if cache is not None:
        cache[key] = move
    return move


def rollout(net: EngineNet, board: Board, horizon: int) -> list[tuple[Board, Move]]:
    """Greedy continuation: repeatedly apply the argmax move.

    Returns up to `horizon` (resulting board, move) pairs; stops early at
    terminal positions. A terminal start yields an empty list.
    """
    if horizon < 1:
        raise ValueError("rollout horizon must be >= 1")
    out: list[tuple[Board, Move]] = []
    current = board
    for _ in range(horizon):
        if game_status(current) is not GameStatus.ONGOING:
            break
        move = _argmax_move(net, current)
        current = apply_move(current, move)
        out.append((current, move))
    return out


def select_alternative(net: EngineNet, board: Board,
                       actual: Move) -> tuple[Move, bool]:
    """Best policy move other than `actual`.

    Returns (move, degenerate); degenerate is True when `actual` is the only
    legal move, in which case `actual` itself is returned.
    """
    ev = net.evaluate(board)
    if len(ev.legal_moves) == 1:
        return ev.legal_moves[0], True
    actual_key = (actual.from_sq, actual.to_sq, actual.promotion)
    best, best_p = None, -1.0
    for move, idx in zip(ev.legal_moves, ev.legal_indices):
        if move.key() == actual_key:
            continue
        p = ev.policy[idx]
        if p > best_p:
            best, best_p = move, p
    return best, False


def _final_white_score(board: Board, capped: bool) -> float:
    status = game_status(board)
    if status is GameStatus.CHECKMATE:
        winner = -board.stm
        return 1.0 if winner == WHITE else 0.0
    return 0.5  # stalemate, draws, or ply cap


def self_play(net: EngineNet, n_games: int,
              config: SelfPlayConfig | None = None) -> SelfPlayResult:
    """Play full games against itself, labeling tuples with final outcomes.

    The first `temperature_plies` plies sample from the policy (temperature
    1.0); the rest play argmax. Fixed seeds reproduce identical games.
    """
    config = config or SelfPlayConfig()
    tuples: list[TrainingTuple] = []
    games: list[GameRecord] = []
    for g in range(n_games):
        rng = np.random.default_rng((config.seed, g))
        board = Board.initial()
        steps: list[tuple[Board, Move]] = []
        sans: list[str] = []
        capped = True
        for ply in range(config.max_plies):
            if game_status(board) is not GameStatus.ONGOING:
                capped = False
                break
            if ply < config.temperature_plies:
                ev = net.evaluate(board)
                probs = ev.policy[ev.legal_indices]
                choice = rng.choice(len(ev.legal_moves), p=probs / probs.sum())
                move = ev.legal_moves[int(choice)]
            else:
                move = _argmax_move(net, board)
            steps.append((board, move))
            sans.append(san(board, move))
            board = apply_move(board, move)
        white_score = _final_white_score(board, capped)
        for b, m in steps:
            outcome = white_score if b.stm == WHITE else 1.0 - white_score
            tuples.append(TrainingTuple(b, m, outcome))
        result = {1.0: "1-0", 0.0: "0-1", 0.5: "1/2-1/2"}[white_score]
        games.append(GameRecord(moves=[m for _, m in steps], san_moves=sans,
                                result=result, seed=config.seed,
                                final_status=game_status(board)))
    return SelfPlayResult(tuples=tuples, games=games)


def gate(candidate: EngineNet, incumbent: EngineNet, games: int = 20,
         threshold: float = 0.55,
         config: SelfPlayConfig | None = None) -> GatingReport:
    """Head-to-head argmax match with alternating colors.

    The candidate is accepted only when wins + draws/2 exceeds the threshold
    fraction of games (strict inequality).
    """
    if games % 2 != 0:
        raise ValueError("gate: games must be even so colors alternate")
    config = config or SelfPlayConfig()
    cand_cache: dict = {}
    inc_cache: dict = {}
    wins = draws = losses = 0
    for g in range(games):
        candidate_is_white = g % 2 == 0
        board = Board.initial()
        for _ in range(config.max_plies):
            if game_status(board) is not GameStatus.ONGOING:
                break
            white_to_move = board.stm == WHITE
            if white_to_move == candidate_is_white:
                move = _argmax_move(candidate, board, cand_cache)
            else:
                move = _argmax_move(incumbent, board, inc_cache)
            board = apply_move(board, move)
        white_score = _final_white_score(board, False)
        cand_score = white_score if candidate_is_white else 1.0 - white_score
        if cand_score == 1.0:
            wins += 1
        elif cand_score == 0.0:
            losses += 1
        else:
            draws += 1
    return GatingReport(games=games, wins=wins, draws=draws, losses=losses,
                        threshold=threshold)


def games_to_pgn(games: list[GameRecord], checkpoint_hash: str) -> str:
    """Render self-play games as PGN with provenance header tags."""
    chunks = []
    for i, game in enumerate(games):
        tags = [f'[Event "selfplay"]', f'[Round "{i + 1}"]',
                f'[White "engine"]', f'[Black "engine"]',
                f'[Result "{game.result}"]',
                f'[CheckpointHash "{checkpoint_hash}"]',
                f'[Seed "{game.seed}"]']
        body = []
        for ply, text in enumerate(game.san_moves):
            if ply % 2 == 0:
                body.append(f"{ply // 2 + 1}.")
            body.append(text)
        body.append(game.result)
        chunks.append("\n".join(tags) + "\n\n" + " ".join(body) + "\n")
    return "\n".join(chunks)
