"""Operator command line: train, selfplay, gate, comment, eval, serve.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chess import Board, ChessError, parse_fen, parse_move_text
from .commentary import (CATEGORIES, CommentaryConfig, CommentaryTrainConfig,
                         CommentCategory, GenerationConfig, ModelBundle,
                         NoContinuationError, build_contexts, decode_comment,
                         train_commentary)
from .data import (build_vocab, encode_records, extract_engine_tuples,
                   load_commentary_dataset, parse_pgn, split_by_game,
                   write_split_manifest, write_tuple_shard)
from .engine import (EngineConfig, EngineNet, EngineTrainConfig,
                     SelfPlayConfig, games_to_pgn, gate, self_play,
                     train_supervised, write_loss_curve)
from .metrics import bleu_corpus, meteor_simplified, report
from .nn import (Checkpoint, CheckpointError, NumericsError, load_checkpoint,
                 restore_parameters, save_checkpoint)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="scc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    engine = sub.add_parser("engine")
    esub = engine.add_subparsers(dest="engine_command", required=True,
                                 parser_class=_Parser)

    p = esub.add_parser("train")
    p.add_argument("--pgn", required=True)
    p.add_argument("--min-rating", type=int, default=2000)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--channels", type=int, default=64)
    p.add_argument("--layers", type=int, default=4)
    p.add_argument("--state-dim", type=int, default=128)
    p.add_argument("--loss-curve", default=None)
    p.add_argument("--tuples-out", default=None)

    p = esub.add_parser("selfplay")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--games", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--max-plies", type=int, default=300)

    p = esub.add_parser("gate")
    p.add_argument("--candidate", required=True)
    p.add_argument("--incumbent", required=True)
    p.add_argument("--games", type=int, default=20)
    p.add_argument("--threshold", type=float, default=0.55)
    p.add_argument("--max-plies", type=int, default=300)

    comment = sub.add_parser("comment")
    csub = comment.add_subparsers(dest="comment_command", required=True,
                                  parser_class=_Parser)

    p = csub.add_parser("train")
    p.add_argument("--data", required=True)
    p.add_argument("--engine", required=True)
    p.add_argument("--mode", choices=["single", "mult"], required=True)
    p.add_argument("--category", default="all",
                   choices=["all"] + [c.value for c in CATEGORIES])
    p.add_argument("--out", required=True)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--d", type=int, default=128)
    p.add_argument("--hidden", type=int, default=256)
    p.add_argument("--embed-dim", type=int, default=128)
    p.add_argument("--move-embed-dim", type=int, default=64)
    p.add_argument("--min-word-freq", type=int, default=2)
    p.add_argument("--freeze-engine", action="store_true")

    p = csub.add_parser("generate")
    p.add_argument("--bundle", required=True)
    p.add_argument("--fen", required=True)
    p.add_argument("--move", required=True)
    p.add_argument("--category", required=True,
                   choices=[c.value for c in CATEGORIES])
    p.add_argument("--beam", type=int, default=4)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--max-tokens", type=int, default=50)

    p = sub.add_parser("eval")
    p.add_argument("--hyps", required=True)
    p.add_argument("--refs", required=True)
    p.add_argument("--metric", required=True,
                   choices=["bleu2", "bleu4", "meteor_s"])
    p.add_argument("--by-category", default=None)

    p = sub.add_parser("serve")
    p.add_argument("--bundle", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def _load_engine(path: str) -> EngineNet:
    ck = load_checkpoint(path)
    net = EngineNet(EngineConfig.from_dict(ck.hyperparams))
    restore_parameters(ck, net.parameters())
    return net


def _cmd_engine_train(args) -> int:
    pgn_text = Path(args.pgn).read_text(encoding="utf-8")
    games, rejects = parse_pgn(pgn_text)
    tuples, stats = extract_engine_tuples(games, min_rating=args.min_rating)
    if not tuples:
        raise DataError(f"{args.pgn}: no usable training tuples "
                        f"(games={len(games)}, rejected={len(rejects)})")
    print(f"parsed {len(games)} games ({len(rejects)} rejected); "
          f"{len(tuples)} tuples from {stats.kept_games} kept games")
    config = EngineTrainConfig(
        steps=args.steps, batch_size=args.batch_size, seed=args.seed,
        engine=EngineConfig(channels=args.channels, conv_layers=args.layers,
                            state_dim=args.state_dim))
    result = train_supervised(tuples, config)
    if args.tuples_out:
        write_tuple_shard(args.tuples_out, tuples)
    if args.loss_curve:
        write_loss_curve(args.loss_curve, result.loss_curve)
    if result.aborted:
        print(f"training aborted: {result.message}", file=sys.stderr)
        return EXIT_NUMERIC
    save_checkpoint(args.out, result.net.parameters(), result.net.hyperparams())
    first, last = result.loss_curve[0][1], result.loss_curve[-1][1]
    print(f"trained {args.steps} steps: loss {first:.4f} -> {last:.4f}; "
          f"checkpoint {args.out}")
    return EXIT_OK


def _cmd_engine_selfplay(args) -> int:
    net = _load_engine(args.ckpt)
    config = SelfPlayConfig(max_plies=args.max_plies, seed=args.seed)
    result = self_play(net, args.games, config)
    ck_hash = load_checkpoint(args.ckpt).model_id()
    Path(args.out).write_text(games_to_pgn(result.games, ck_hash),
                              encoding="utf-8")
    print(f"played {args.games} games, {len(result.tuples)} tuples; "
          f"PGN written to {args.out}")
    return EXIT_OK


def _cmd_engine_gate(args) -> int:
    candidate = _load_engine(args.candidate)
    incumbent = _load_engine(args.incumbent)
    rep = gate(candidate, incumbent, games=args.games,
               threshold=args.threshold,
               config=SelfPlayConfig(max_plies=args.max_plies))
    verdict = "accepted" if rep.accepted else "rejected"
    print(f"{verdict}: score {rep.candidate_score:g}/{rep.games} "
          f"(wins {rep.wins}, draws {rep.draws}, losses {rep.losses}, "
          f"threshold {rep.threshold})")
    return EXIT_OK


def _cmd_comment_train(args) -> int:
    data_dir = Path(args.data)
    tsv = data_dir / "commentary.tsv"
    if not tsv.exists():
        raise DataError(f"missing commentary file: {tsv}")
    loaded = load_commentary_dataset(tsv)
    if not loaded.records:
        raise DataError(f"{tsv}: no usable commentary rows")
    split = split_by_game(loaded.records, seed=args.seed)
    vocab = build_vocab([r.words for r in split.train],
                        min_frequency=args.min_word_freq)
    engine_ck = load_checkpoint(args.engine)
    config = CommentaryConfig(
        d=args.d, decoder_hidden=args.hidden, embed_dim=args.embed_dim,
        move_embed_dim=args.move_embed_dim, horizon=args.horizon,
        engine=EngineConfig.from_dict(engine_ck.hyperparams))
    cats = (list(CATEGORIES) if args.category == "all"
            else [CommentCategory(args.category)])
    bundle = ModelBundle.create(args.mode, vocab, config, categories=cats,
                                engine_checkpoint=engine_ck, seed=args.seed)

    def by_cat(records):
        samples = encode_records(records, vocab)
        out = {c: [] for c in cats}
        for s in samples:
            if s.category in out:
                out[s.category].append(s)
        return out

    train_config = CommentaryTrainConfig(
        steps=args.steps, batch_size=args.batch_size, seed=args.seed,
        freeze_engine=args.freeze_engine)
    rep = train_commentary(by_cat(split.train), bundle, train_config,
                           val_by_cat=by_cat(split.valid))
    out_dir = Path(args.out)
    bundle.save(out_dir)
    write_split_manifest(out_dir / "split.tsv", split.assignment)
    for warning in rep.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for log in rep.logs:
        tail = log.epochs[-1] if log.epochs else None
        val = (f", val {tail.val_loss:.4f}" if tail and tail.val_loss is not None
               else "")
        print(f"{log.category.value}: final train loss "
              f"{log.final_train_loss:.4f}{val}")
    print(f"bundle saved to {out_dir} (model id {bundle.model_id()})")
    return EXIT_OK


def _cmd_comment_generate(args) -> int:
    bundle = ModelBundle.load(args.bundle)
    board = parse_fen(args.fen)
    move = parse_move_text(board, args.move)
    category = CommentCategory(args.category)
    comp = bundle.category_components(category)
    horizon = args.horizon or bundle.config.horizon
    built = build_contexts(category, board, move, comp.engine,
                           comp.move_encoder, comp.mce, comp.model.w_diff,
                           horizon=horizon)
    mode = "greedy" if args.beam <= 1 else "beam"
    result = decode_comment(built, comp.model, comp.mce, bundle.vocab,
                            GenerationConfig(mode=mode, beam_width=max(args.beam, 1),
                                             max_tokens=args.max_tokens))
    aux = result.aux
    white_before = aux.win_rate_before if board.stm == 1 else 1 - aux.win_rate_before
    white_after = aux.win_rate_after if board.stm == 1 else 1 - aux.win_rate_after
    alt = aux.alternative.uci() if aux.alternative else "-"
    print("\t".join([board.fen(), move.uci(), category.value, result.text,
                     f"{white_before:.4f}", f"{white_after:.4f}", alt]))
    return EXIT_OK


def _read_token_lines(path: str) -> list[list[str]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.split() for line in lines]


def _cmd_eval(args) -> int:
    hyps = _read_token_lines(args.hyps)
    refs = _read_token_lines(args.refs)
    if len(hyps) != len(refs):
        raise DataError(f"line count mismatch: {len(hyps)} hypotheses vs "
                        f"{len(refs)} references")
    if not hyps:
        raise DataError("no evaluation pairs")
    pairs = list(zip(hyps, refs))
    if args.by_category:
        cats = Path(args.by_category).read_text(encoding="utf-8").split()
        if len(cats) != len(pairs):
            raise DataError("category file line count mismatch")
        by_cat: dict[str, list] = {}
        for cat, pair in zip(cats, pairs):
            by_cat.setdefault(cat, []).append(pair)
        print(report(by_cat).table())
        return EXIT_OK
    if args.metric == "meteor_s":
        score = meteor_simplified(pairs)
    else:
        score = bleu_corpus(pairs, 2 if args.metric == "bleu2" else 4)
    print(f"{score:.4f}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .server import InferenceServer
    bundle = ModelBundle.load(args.bundle)
    server = InferenceServer(bundle, host=args.host, port=args.port)
    print(f"serving bundle {server.model_id} on "
          f"http://{args.host}:{server.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


_DISPATCH = {
    ("engine", "train"): _cmd_engine_train,
    ("engine", "selfplay"): _cmd_engine_selfplay,
    ("engine", "gate"): _cmd_engine_gate,
    ("comment", "train"): _cmd_comment_train,
    ("comment", "generate"): _cmd_comment_generate,
}


def run_cli(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "serve":
            return _cmd_serve(args)
        key = (args.command, getattr(args, f"{args.command}_command"))
        return _DISPATCH[key](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, ChessError, CheckpointError, NoContinuationError,
            FileNotFoundError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
