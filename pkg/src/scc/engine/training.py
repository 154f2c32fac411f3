"""Supervised minibatch training and the self-play promotion cycle."""

from __future__ import annotations

import copy
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..nn import Optimizer, OptimizerConfig
from .loss import TrainingTuple, engine_loss
from .network import EngineConfig, EngineNet
from .selfplay import GatingReport, SelfPlayConfig, gate, self_play


@dataclass
class EngineTrainConfig:
    steps: int = 200
    batch_size: int = 32
    seed: int = 0
    engine: EngineConfig = field(default_factory=EngineConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    snapshot_every: int = 50


@dataclass
class TrainingResult:
    net: EngineNet
    loss_curve: list[tuple[int, float]]
    aborted: bool = False
    message: str = ""


def train_supervised(tuples: list[TrainingTuple], config: EngineTrainConfig,
                     net: EngineNet | None = None) -> TrainingResult:
    """Minibatch descent on the joint loss; deterministic under a fixed seed.

    A non-finite loss aborts training and restores the last good snapshot.
    """
    if not tuples:
        raise ValueError("train_supervised: no training tuples")
    net = net or EngineNet(config.engine, seed=config.seed)
    params = net.parameters()
    opt = Optimizer(params, config.optimizer)
    rng = np.random.default_rng(config.seed)

    order = rng.permutation(len(tuples))
    cursor = 0
    curve: list[tuple[int, float]] = []
    snapshot = {p.name: p.data.copy() for p in params}
    for step in range(config.steps):
        if cursor + config.batch_size > len(order):
            order = rng.permutation(len(tuples))
            cursor = 0
        batch_idx = order[cursor:cursor + min(config.batch_size, len(order))]
        cursor += config.batch_size
        batch = [tuples[i] for i in batch_idx]
        loss = engine_loss(net, batch)
        value = float(loss.data)
        if not np.isfinite(value):
            for p in params:
                p.data[...] = snapshot[p.name]
                p.zero_grad()
            return TrainingResult(net, curve, aborted=True,
                                  message=f"non-finite loss at step {step}")
        loss.backward()
        opt.step()
        curve.append((step, value))
        if (step + 1) % config.snapshot_every == 0:
            snapshot = {p.name: p.data.copy() for p in params}
    return TrainingResult(net, curve)


def write_loss_curve(path: str | Path, curve: list[tuple[int, float]]) -> None:
    """Comma-separated step,loss records, one per step."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "loss"])
        for step, loss in curve:
            writer.writerow([step, f"{loss:.8f}"])


def smoothed(values: list[float], window: int = 20) -> list[float]:
    out = []
    for i in range(len(values)):
        lo = max(0, i - window + 1)
        out.append(float(np.mean(values[lo:i + 1])))
    return out


@dataclass
class CycleResult:
    incumbent: EngineNet
    report: GatingReport
    selfplay_games: int


def training_cycle(incumbent: EngineNet, supervised: list[TrainingTuple],
                   selfplay_games: int, config: EngineTrainConfig,
                   selfplay_config: SelfPlayConfig | None = None,
                   gate_games: int = 20, threshold: float = 0.55) -> CycleResult:
    """One improvement iteration over mixed supervised + self-play data.

    The self-play game count starts at zero and increases by one each time a
    candidate passes gating against the incumbent.
    """
    mixed = list(supervised)
    if selfplay_games > 0:
        sp_config = selfplay_config or SelfPlayConfig(seed=config.seed)
        mixed.extend(self_play(incumbent, selfplay_games, sp_config).tuples)
    candidate = EngineNet(config.engine, seed=config.seed)
    for p_new, p_old in zip(candidate.parameters(), incumbent.parameters()):
        p_new.data[...] = p_old.data
    result = train_supervised(mixed, config, net=candidate)
    report = gate(result.net, incumbent, games=gate_games, threshold=threshold)
    if report.accepted:
        return CycleResult(result.net, report, selfplay_games + 1)
    return CycleResult(incumbent, report, selfplay_games)
