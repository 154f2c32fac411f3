"""Deterministic 7:1:2 dataset splits partitioned by game identity."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass
class DatasetSplit:
    train: list
    valid: list
    test: list
    assignment: dict[str, str]  # game id -> split name

    def counts(self) -> tuple[int, int, int]:
        return len(self.train), len(self.valid), len(self.test)


def split_by_game(records: Sequence, seed: int = 0,
                  ratios: tuple[float, float, float] = (0.7, 0.1, 0.2)
                  ) -> DatasetSplit:
    """Shuffle distinct game ids and assign 70/10/20% of games per split.

    Every record follows its game, so no game id straddles two splits.
    """
    game_ids = sorted({r.game_id for r in records})
    rng = np.random.default_rng(seed)
    order = [game_ids[i] for i in rng.permutation(len(game_ids))]
    n = len(order)
    n_train = int(round(n * ratios[0]))
    n_valid = int(round(n * ratios[1]))
    n_valid = min(n_valid, n - n_train)
    assignment: dict[str, str] = {}
    for i, gid in enumerate(order):
        if i < n_train:
            assignment[gid] = "train"
        elif i < n_train + n_valid:
            assignment[gid] = "valid"
        else:
            assignment[gid] = "test"
    split = DatasetSplit([], [], [], assignment)
    buckets = {"train": split.train, "valid": split.valid, "test": split.test}
    for r in records:
        buckets[assignment[r.game_id]].append(r)
    return split


def write_split_manifest(path: str | Path, assignment: dict[str, str]) -> None:
    lines = [f"{gid}\t{name}" for gid, name in sorted(assignment.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_split_manifest(path: str | Path) -> dict[str, str]:
    assignment = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        gid, name = line.split("\t")
        assignment[gid] = name
    return assignment
