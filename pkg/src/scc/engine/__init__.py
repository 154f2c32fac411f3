"""Neural chess engine: plane encoding, evaluation, self-play and gating."""

from .planes import PLANE_COUNT, encode_batch, encode_planes
from .moveindex import MOVE_INDEX_SPACE, index_components, move_to_index
from .network import (EngineConfig, EngineEval, EngineNet,
                      TerminalPositionError)
from .loss import TrainingTuple, engine_loss, loss_terms, policy_nll
from .selfplay import (GameRecord, GatingReport, SelfPlayConfig,
                       SelfPlayResult, games_to_pgn, gate, match_report,
                       rollout, select_alternative, self_play)
from .training import (CycleResult, EngineTrainConfig, TrainingResult,
                       smoothed, train_supervised, training_cycle,
                       write_loss_curve)

__all__ = [
    "PLANE_COUNT", "encode_planes", "encode_batch", "MOVE_INDEX_SPACE",
    "move_to_index", "index_components", "EngineConfig", "EngineEval",
    "EngineNet", "TerminalPositionError", "TrainingTuple", "engine_loss",
    "loss_terms", "policy_nll", "GatingReport", "GameRecord",
    "SelfPlayConfig", "SelfPlayResult", "match_report", "gate", "rollout",
    "select_alternative", "self_play", "games_to_pgn", "EngineTrainConfig",
    "TrainingResult", "CycleResult", "train_supervised", "training_cycle",
    "smoothed", "write_loss_curve",
]
