"""Plane encoding, evaluation contracts, loss values, self-play and gating."""

import numpy as np
import pytest

from scc.chess import (Board, GameStatus, apply_move, game_status,
                       parse_move_text)
from scc.engine import (EngineConfig, EngineNet, MOVE_INDEX_SPACE,
                        SelfPlayConfig, TerminalPositionError, TrainingTuple,
                        encode_planes, engine_loss, gate, index_components,
                        loss_terms, match_report, move_to_index, rollout,
                        select_alternative, self_play)
from scc.nn import (Parameter, gradient_check, load_checkpoint,
                    restore_parameters, save_checkpoint)

TINY = EngineConfig(channels=8, conv_layers=2, state_dim=16)

MATE_FEN_MOVES = ("f2f3", "e7e5", "g2g4", "d8h4")


def tiny_net(seed=0):
    return EngineNet(TINY, seed=seed)


def play(board, *texts):
    for t in texts:
        board = apply_move(board, parse_move_text(board, t))
    return board


class TestPlanes:
    def test_initial_piece_planes(self):
        p = encode_planes(Board.initial())
        assert p[0].sum() == 8  # mover pawns
        assert p[5].sum() == 1  # mover king
        assert p[6].sum() == 8  # opponent pawns

    def test_initial_castling_planes_all_ones(self):
        p = encode_planes(Board.initial())
        for i in range(16, 20):
            assert np.all(p[i] == 1.0)

    def test_initial_counters_zero(self):
        p = encode_planes(Board.initial())
        for i in (12, 13, 15):
            assert np.all(p[i] == 0.0)
        assert np.allclose(p[14], 1 / 200)

    def test_piece_planes_binary_and_sums(self):
        b = play(Board.initial(), "e2e4", "d7d5", "e4d5")
        p = encode_planes(b)
        for i in range(12):
            assert set(np.unique(p[i])) <= {0.0, 1.0}
        total = sum(p[i].sum() for i in range(12))
        assert total == sum(1 for x in b.placement if x)

    def test_orientation_flips_for_black(self):
        b = play(Board.initial(), "e2e4")
        p = encode_planes(b)  # black to move: its pawns are planes 0-5
        # Black pawns sit on rank 7, which orients to row 1.
        assert p[0][1].sum() == 8

    def test_mirror_invariance(self):
        b = play(Board.initial(), "e2e4", "g8f6", "b1c3")
        assert np.array_equal(encode_planes(b), encode_planes(b.mirrored()))


class TestMoveIndex:
    def test_space_size(self):
        assert MOVE_INDEX_SPACE == 20480

    def test_bijection_over_legal_moves(self):
        for fen_moves in [(), ("e2e4",), ("e2e4", "d7d5")]:
            b = play(Board.initial(), *fen_moves)
            seen = set()
            for m in b.legal_moves():
                idx = move_to_index(m)
                assert 0 <= idx < MOVE_INDEX_SPACE
                assert idx not in seen
                seen.add(idx)
                f, t, promo = index_components(idx)
                assert (f, t, promo) == (m.from_sq, m.to_sq, m.promotion)

    def test_promotion_indices_distinct(self):
        b = Board.from_fen("8/P6k/8/8/8/8/8/K7 w - - 0 1")
        promos = [m for m in b.legal_moves() if m.promotion]
        assert len({move_to_index(m) for m in promos}) == 4


class TestEvaluate:
    def test_policy_masked_to_legal(self):
        net = tiny_net()
        b = Board.initial()
        ev = net.evaluate(b)
        legal = set(ev.legal_indices.tolist())
        assert abs(ev.policy[ev.legal_indices].sum() - 1.0) < 1e-6
        off_mask = np.ones(MOVE_INDEX_SPACE, dtype=bool)
        off_mask[list(legal)] = False
        assert np.all(ev.policy[off_mask] == 0.0)

    def test_zero_init_uniform_and_half(self):
        net = tiny_net()
        ev = net.evaluate(Board.initial())
        assert np.allclose(ev.policy[ev.legal_indices], 1 / 20)
        assert abs(ev.win_rate - 0.5) < 1e-12

    def test_deterministic_state(self):
        net = tiny_net(3)
        b = play(Board.initial(), "e2e4")
        e1 = net.evaluate(b).board_state
        e2 = net.evaluate(b).board_state
        assert np.array_equal(e1, e2)

    def test_terminal_rejected(self):
        net = tiny_net()
        mate = play(Board.initial(), *MATE_FEN_MOVES)
        with pytest.raises(TerminalPositionError):
            net.evaluate(mate)

    def test_encode_state_works_on_terminal(self):
        net = tiny_net()
        mate = play(Board.initial(), *MATE_FEN_MOVES)
        es, v = net.encode_state(mate)
        assert es.shape == (TINY.state_dim,)
        assert 0.0 <= v <= 1.0

    def test_perspective_consistency_under_mirror(self):
        net = tiny_net(7)
        for moves in [(), ("e2e4",), ("e2e4", "c7c5")]:
            b = play(Board.initial(), *moves)
            white_v = net.win_rate_white(b)
            mirrored_white_v = net.win_rate_white(b.mirrored())
            assert abs(white_v - (1.0 - mirrored_white_v)) < 1e-9

    def test_masked_support_over_thousand_playout_positions(self):
        import random as pyrandom
        net = tiny_net(9)
        rng = pyrandom.Random(0)
        checked = 0
        while checked < 1000:
            b = Board.initial()
            for _ in range(60):
                if game_status(b) is not GameStatus.ONGOING:
                    break
                ev = net.evaluate(b)
                legal = {move_to_index(m) for m in b.legal_moves()}
                support = set(np.flatnonzero(ev.policy).tolist())
                assert support <= legal
                assert abs(ev.policy[ev.legal_indices].sum() - 1.0) < 1e-6
                checked += 1
                if checked >= 1000:
                    break
                b = apply_move(b, rng.choice(b.legal_moves()))


class TestEngineLoss:
    def test_spot_value(self):
        assert abs(loss_terms(0.5, 0.5, 1.0) - 0.943147) < 1e-5

    def test_perfect_prediction_zero(self):
        assert loss_terms(1.0, 0.5, 0.5) == 0.0

    def test_matches_independent_recompute(self):
        net = tiny_net(1)
        rng = np.random.default_rng(0)
        for p in net.parameters():  # non-trivial heads
            p.data += rng.normal(0, 0.05, size=p.data.shape)
        b0 = Board.initial()
        b1 = play(b0, "e2e4")
        batch = [
            TrainingTuple(b0, parse_move_text(b0, "e2e4"), 1.0),
            TrainingTuple(b1, parse_move_text(b1, "d7d5"), 0.0),
        ]
        loss = float(engine_loss(net, batch).data)
        expected = 0.0
        for t in batch:
            ev = net.evaluate(t.board)
            prob = ev.policy[move_to_index(t.move)]
            expected += loss_terms(prob, ev.win_rate, t.outcome)
        expected /= len(batch)
        assert abs(loss - expected) < 1e-9

    def test_decomposition_nonnegative(self):
        net = tiny_net(2)
        b = Board.initial()
        t = TrainingTuple(b, parse_move_text(b, "g1f3"), 0.5)
        ev = net.evaluate(b)
        prob = ev.policy[move_to_index(t.move)]
        policy_term = -np.log(prob)
        value_term = (ev.win_rate - t.outcome) ** 2
        assert policy_term >= 0 and value_term >= 0
        assert abs(float(engine_loss(net, [t]).data)
                   - (policy_term + value_term)) < 1e-9

    def test_illegal_move_rejected(self):
        b = Board.initial()
        with pytest.raises(Exception, match="llegal"):
            TrainingTuple(b, parse_move_text(play(b, "e2e4"), "d7d5"), 1.0)

    @pytest.mark.parametrize("seed", range(2))
    def test_gradient(self, seed):
        cfg = EngineConfig(channels=4, conv_layers=2, state_dim=8)
        net = EngineNet(cfg, seed=seed)
        rng = np.random.default_rng(seed)
        for p in net.parameters():
            p.data += rng.normal(0, 0.05, size=p.data.shape)
        b = Board.initial()
        batch = [TrainingTuple(b, parse_move_text(b, "e2e4"), 1.0)]
        report = gradient_check(lambda: engine_loss(net, batch),
                                net.parameters(),
                                rng=np.random.default_rng(seed + 5),
                                coords_per_param=2)
        assert report.passed, report.summary()


class TestGating:
    def test_scoring_cases(self):
        assert match_report(12, 0, 8).accepted            # 0.60 > 0.55
        assert not match_report(11, 0, 9).accepted        # 0.55 is not > 0.55
        assert match_report(10, 3, 7).accepted            # 0.575 > 0.55

    def test_score_arithmetic(self):
        r = match_report(10, 3, 7)
        assert r.candidate_score == 11.5
        assert r.games == 20

    def test_monotone_in_wins(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            wins = int(rng.integers(0, 21))
            draws = int(rng.integers(0, 21 - wins))
            losses = 20 - wins - draws
            before = match_report(wins, draws, losses)
            if losses > 0:
                after = match_report(wins + 1, draws, losses - 1)
                assert not (before.accepted and not after.accepted)

    def test_equal_nets_rejected_at_half(self):
        net = tiny_net(0)
        report = gate(net, net, games=4, threshold=0.55,
                      config=SelfPlayConfig(max_plies=40))
        assert report.candidate_score == report.games / 2
        assert not report.accepted

    def test_odd_games_rejected(self):
        net = tiny_net()
        with pytest.raises(ValueError):
            gate(net, net, games=3)


class TestRolloutAndAlternative:
    def test_rollout_closure_and_length(self):
        net = tiny_net(4)
        b = play(Board.initial(), "e2e4")
        pairs = rollout(net, b, horizon=4)
        assert 1 <= len(pairs) <= 4
        current = b
        for after, move in pairs:
            assert current.find_move(move.from_sq, move.to_sq,
                                     move.promotion) is not None
            current = apply_move(current, move)
            assert current == after

    def test_rollout_from_mate_empty(self):
        net = tiny_net()
        mate = play(Board.initial(), *MATE_FEN_MOVES)
        assert rollout(net, mate, horizon=4) == []

    def test_rollout_deterministic(self):
        net = tiny_net(5)
        b = Board.initial()
        a = [(m.uci()) for _, m in rollout(net, b, 6)]
        c = [(m.uci()) for _, m in rollout(net, b, 6)]
        assert a == c

    def _biased_net(self, board, weights):
        """Zero net whose policy puts the given probabilities on given UCIs."""
        net = tiny_net()
        for uci, logit in weights.items():
            m = parse_move_text(board, uci)
            net.policy_head.b.data[move_to_index(m)] = logit
        return net

    def test_excludes_actual(self):
        b = Board.initial()
        net = self._biased_net(b, {"e2e4": 8.0, "d2d4": 5.0})
        actual = parse_move_text(b, "e2e4")
        alt, degenerate = select_alternative(net, b, actual)
        assert alt.uci() == "d2d4" and not degenerate

    def test_returns_global_argmax_when_actual_differs(self):
        b = Board.initial()
        net = self._biased_net(b, {"g1f3": 9.0})
        actual = parse_move_text(b, "e2e4")
        alt, degenerate = select_alternative(net, b, actual)
        assert alt.uci() == "g1f3" and not degenerate

    def test_single_legal_move_degenerate(self):
        b = Board.from_fen("k7/7R/8/8/8/8/8/1K6 b - - 0 1")
        moves = b.legal_moves()
        assert len(moves) == 1
        net = tiny_net()
        alt, degenerate = select_alternative(net, b, moves[0])
        assert degenerate and alt == moves[0]


class TestSelfPlay:
    def test_tuples_legal_and_consistent(self):
        net = tiny_net(6)
        result = self_play(net, 2, SelfPlayConfig(max_plies=30, seed=3))
        assert result.games and result.tuples
        for t in result.tuples:
            assert t.board.find_move(t.move.from_sq, t.move.to_sq,
                                     t.move.promotion) is not None
        for game in result.games:
            assert game.result in ("1-0", "0-1", "1/2-1/2")

    def test_outcome_labels_complementary(self):
        net = tiny_net(6)
        result = self_play(net, 1, SelfPlayConfig(max_plies=24, seed=1))
        whites = {t.outcome for t in result.tuples if t.board.stm == 1}
        blacks = {t.outcome for t in result.tuples if t.board.stm == -1}
        assert len(whites) == 1 and len(blacks) == 1
        s = whites.pop()
        assert blacks.pop() == 1.0 - s
        assert s in (0.0, 0.5, 1.0)

    def test_seeded_reproducibility(self):
        net = tiny_net(2)
        cfg = SelfPlayConfig(max_plies=20, seed=9)
        a = self_play(net, 2, cfg)
        b = self_play(net, 2, cfg)
        assert [[m.uci() for m in g.moves] for g in a.games] == \
               [[m.uci() for m in g.moves] for g in b.games]


class TestEngineCheckpoint:
    def test_roundtrip_preserves_evaluation(self, tmp_path):
        net = tiny_net(8)
        rng = np.random.default_rng(1)
        for p in net.parameters():
            p.data += rng.normal(0, 0.1, size=p.data.shape)
        path = tmp_path / "engine.ckpt"
        save_checkpoint(path, net.parameters(), net.hyperparams())
        ck = load_checkpoint(path)
        fresh = EngineNet(EngineConfig.from_dict(ck.hyperparams), seed=99)
        restore_parameters(ck, fresh.parameters())
        b = Board.initial()
        a, b_ = net.evaluate(b), fresh.evaluate(b)
        assert np.array_equal(a.policy, b_.policy)
        assert a.win_rate == b_.win_rate
