"""Policy/value network over feature planes.

The conv trunk produces the board representation shared with the commentary
models; a policy head scores the full move index space (masked to legal
moves) and a value head estimates the side-to-move win rate. Both heads are
zero-initialized so an untrained net plays uniformly at win rate 0.5.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..chess import Board, GameStatus, Move, game_status
from ..nn import (Conv2d, Dense, Parameter, Tensor, no_grad, relu, reshape,
                  sigmoid, softmax)
from .moveindex import MOVE_INDEX_SPACE, move_to_index
from .planes import PLANE_COUNT, encode_batch, encode_planes


class TerminalPositionError(ValueError):
    """Raised when a terminal board is evaluated for a move prediction."""


@dataclass
class EngineConfig:
    channels: int = 64
    conv_layers: int = 4
    state_dim: int = 128

    def to_dict(self) -> dict:
        return {"channels": self.channels, "conv_layers": self.conv_layers,
                "state_dim": self.state_dim}

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        return cls(channels=int(d["channels"]),
                   conv_layers=int(d["conv_layers"]),
                   state_dim=int(d["state_dim"]))


@dataclass
class EngineEval:
    """Engine outputs for one position: representation, policy, win rate."""

    board_state: np.ndarray          # [state_dim]
    policy: np.ndarray               # [MOVE_INDEX_SPACE], zero off legal mask
    win_rate: float                  # side to move, in [0, 1]
    legal_moves: list[Move]
    legal_indices: np.ndarray


class EngineNet:
    def __init__(self, config: EngineConfig | None = None, seed: int = 0,
                 name: str = "engine"):
        self.config = config or EngineConfig()
        rng = np.random.default_rng(seed)
        cfg = self.config
        self.convs = []
        cin = PLANE_COUNT
        for i in range(cfg.conv_layers):
            self.convs.append(Conv2d(cin, cfg.channels, f"{name}.conv{i}", rng))
            cin = cfg.channels
        self.fc = Dense(cfg.channels * 64, cfg.state_dim, f"{name}.fc", rng)
        self.policy_head = Dense(cfg.state_dim, MOVE_INDEX_SPACE,
                                 f"{name}.policy", rng, zero_init=True)
        self.value_head = Dense(cfg.state_dim, 1, f"{name}.value", rng,
                                zero_init=True)

    def parameters(self) -> list[Parameter]:
        params = []
        for conv in self.convs:
            params.extend(conv.parameters())
        params.extend(self.fc.parameters())
        params.extend(self.policy_head.parameters())
        params.extend(self.value_head.parameters())
        return params

    # -- graph-building forward passes (respect no_grad at call sites) -------

    def state_from_planes(self, planes: Tensor) -> Tensor:
        x = planes
        for conv in self.convs:
            x = relu(conv(x))
        if x.data.ndim == 4:
            x = reshape(x, (x.data.shape[0], -1))
        else:
            x = reshape(x, (-1,))
        return relu(self.fc(x))

    def state_value_graph(self, board: Board) -> tuple[Tensor, Tensor]:
        """Board representation and win-rate scalar; valid on any position."""
        es = self.state_from_planes(Tensor(encode_planes(board)))
        v = sigmoid(reshape(self.value_head(es), ()))
        return es, v

    def batch_state(self, boards: list[Board]) -> Tensor:
        return self.state_from_planes(Tensor(encode_batch(boards)))

    # -- inference ------------------------------------------------------------

    def encode_state(self, board: Board) -> tuple[np.ndarray, float]:
        """Representation and win rate without the policy (terminal-safe)."""
        with no_grad():
            es, v = self.state_value_graph(board)
        return es.data, float(v.data)

    def evaluate(self, board: Board) -> EngineEval:
        """Full evaluation; requires an ongoing position (policy needs moves)."""
        if game_status(board) is not GameStatus.ONGOING:
            raise TerminalPositionError(
                f"cannot evaluate terminal position {board.fen()!r}")
        moves = board.legal_moves()
        indices = np.array([move_to_index(m) for m in moves], dtype=np.intp)
        with no_grad():
            es = self.state_from_planes(Tensor(encode_planes(board)))
            logits = self.policy_head(es)
            legal = softmax(Tensor(logits.data[indices]))
            v = sigmoid(reshape(self.value_head(es), ()))
        policy = np.zeros(MOVE_INDEX_SPACE)
        policy[indices] = legal.data
        return EngineEval(board_state=es.data, policy=policy,
                          win_rate=float(v.data), legal_moves=moves,
                          legal_indices=indices)

    def win_rate_white(self, board: Board) -> float:
        """Win rate converted to White's perspective."""
        _, v = self.encode_state(board)
        return v if board.stm == 1 else 1.0 - v

    def hyperparams(self) -> dict:
        return {"kind": "engine", **self.config.to_dict()}
