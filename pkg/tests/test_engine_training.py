"""Supervised training behavior and the gated self-play promotion cycle."""

import numpy as np
import pytest

from scc.engine import (EngineConfig, EngineNet, EngineTrainConfig,
                        SelfPlayConfig, TrainingTuple, smoothed,
                        train_supervised, training_cycle, write_loss_curve)
from scc.nn import OptimizerConfig

from helpers import synthetic_pgn

TINY = EngineConfig(channels=4, conv_layers=2, state_dim=8)


def small_corpus(n=64):
    from scc.data import extract_engine_tuples, parse_pgn
    games, _ = parse_pgn(synthetic_pgn(4, seed=13, max_plies=24,
                                       results=["1-0", "0-1"]))
    tuples, _ = extract_engine_tuples(games, min_rating=2000)
    return tuples[:n]


class TestTrainSupervised:
    def test_deterministic_under_seed(self):
        corpus = small_corpus()
        cfg = EngineTrainConfig(steps=6, batch_size=8, seed=3, engine=TINY)
        a = train_supervised(corpus, cfg)
        b = train_supervised(corpus, cfg)
        assert [l for _, l in a.loss_curve] == [l for _, l in b.loss_curve]

    def test_curve_one_record_per_step(self, tmp_path):
        corpus = small_corpus()
        cfg = EngineTrainConfig(steps=5, batch_size=8, seed=0, engine=TINY)
        result = train_supervised(corpus, cfg)
        assert [s for s, _ in result.loss_curve] == list(range(5))
        write_loss_curve(tmp_path / "c.csv", result.loss_curve)
        lines = (tmp_path / "c.csv").read_text().splitlines()
        assert len(lines) == 6 and lines[0] == "step,loss"

    def test_nonfinite_abort_restores_snapshot(self, monkeypatch):
        import scc.engine.training as training_mod
        from scc.nn import Tensor, mul, sub

        corpus = small_corpus()
        real_loss = training_mod.engine_loss
        calls = {"n": 0}

        def blowing_up(net, batch):
            calls["n"] += 1
            if calls["n"] <= 3:
                return real_loss(net, batch)
            with np.errstate(all="ignore"):
                inf = mul(Tensor(np.asarray(1e308)), 10.0)
                return sub(inf, inf)  # nan, as if the batch overflowed

        monkeypatch.setattr(training_mod, "engine_loss", blowing_up)
        cfg = EngineTrainConfig(steps=8, batch_size=8, seed=0, engine=TINY,
                                snapshot_every=2)
        result = train_supervised(corpus, cfg)
        assert result.aborted
        assert "non-finite" in result.message
        assert len(result.loss_curve) == 3  # steps before the blowup
        for p in result.net.parameters():
            assert np.all(np.isfinite(p.data))

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            train_supervised([], EngineTrainConfig(engine=TINY))


class TestTrainingCycle:
    def test_rejected_candidate_keeps_incumbent_and_count(self):
        corpus = small_corpus(32)
        incumbent = EngineNet(TINY, seed=0)
        cfg = EngineTrainConfig(steps=2, batch_size=8, seed=0, engine=TINY)
        result = training_cycle(incumbent, corpus, selfplay_games=0,
                                config=cfg,
                                selfplay_config=SelfPlayConfig(max_plies=20),
                                gate_games=2)
        assert result.report.games == 2
        if result.report.accepted:
            assert result.selfplay_games == 1
            assert result.incumbent is not incumbent
        else:
            assert result.selfplay_games == 0
            assert result.incumbent is incumbent

    def test_selfplay_games_mixed_in(self):
        corpus = small_corpus(16)
        incumbent = EngineNet(TINY, seed=1)
        cfg = EngineTrainConfig(steps=2, batch_size=4, seed=1, engine=TINY)
        result = training_cycle(incumbent, corpus, selfplay_games=1,
                                config=cfg,
                                selfplay_config=SelfPlayConfig(max_plies=12,
                                                               seed=5),
                                gate_games=2)
        assert result.report.games == 2
