"""Local JSON-over-HTTP inference service.

Stateless: each request carries a FEN and a move; the loaded bundle is
immutable for the process lifetime, so concurrent requests are safe and
greedy decoding makes identical requests return identical bodies.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .chess import ChessError, apply_move, parse_fen, parse_move_text
from .commentary import (CommentCategory, GenerationConfig, ModelBundle,
                         NoContinuationError, build_contexts, decode_comment)
from .engine import rollout, select_alternative


class RequestError(ValueError):
    def __init__(self, kind: str, detail: str):
        super().__init__(detail)
        self.kind = kind
        self.detail = detail

    def payload(self) -> dict:
        return {"error": {"kind": self.kind, "detail": self.detail}}


def _comment_response(bundle: ModelBundle, payload: dict,
                      model_id: str) -> dict:
    if not isinstance(payload, dict):
        raise RequestError("bad-request", "body must be a JSON object")
    fen = payload.get("fen")
    move_text = payload.get("move")
    if not isinstance(fen, str) or not isinstance(move_text, str):
        raise RequestError("bad-request", "fields 'fen' and 'move' are required")
    try:
        board = parse_fen(fen)
        move = parse_move_text(board, move_text)
    except ChessError as exc:
        raise RequestError("invalid-position-or-move", str(exc)) from None

    wanted = payload.get("categories")
    if wanted is None:
        categories = bundle.categories
    else:
        categories = []
        for name in wanted:
            try:
                categories.append(CommentCategory(name))
            except ValueError:
                raise RequestError("unknown-category", name) from None
    horizon = payload.get("horizon") or bundle.config.horizon
    if not isinstance(horizon, int) or not 1 <= horizon <= 16:
        raise RequestError("bad-request", "horizon must be an int in 1..16")

    # One engine answers the position-level questions; in mult mode it is
    # the shared engine.
    engine = bundle.category_components(bundle.categories[0]).engine
    board_after = apply_move(board, move)
    win_before = engine.win_rate_white(board)
    win_after = engine.win_rate_white(board_after)
    alternative, degenerate = select_alternative(engine, board, move)
    continuation = rollout(engine, board_after, horizon)

    comments: dict[str, str] = {}
    errors: dict[str, str] = {}
    config = GenerationConfig(mode="greedy", max_tokens=50)
    for category in categories:
        if category not in bundle.components:
            errors[category.value] = "category not in bundle"
            continue
        comp = bundle.category_components(category)
        try:
            built = build_contexts(category, board, move, comp.engine,
                                   comp.move_encoder, comp.mce,
                                   comp.model.w_diff, horizon=horizon)
            result = decode_comment(built, comp.model, comp.mce, bundle.vocab,
                                    config)
            comments[category.value] = result.text
        except NoContinuationError as exc:
            errors[category.value] = f"no-continuation: {exc}"
    return {
        "comments": comments,
        "errors": errors,
        "win_rate_before": win_before,
        "win_rate_after": win_after,
        "best_alternative": alternative.uci(),
        "alternative_degenerate": degenerate,
        "rollout": [m.uci() for _, m in continuation],
        "model_id": model_id,
    }


def _legal_response(payload: dict) -> dict:
    if not isinstance(payload, dict) or not isinstance(payload.get("fen"), str):
        raise RequestError("bad-request", "field 'fen' is required")
    try:
        board = parse_fen(payload["fen"])
    except ChessError as exc:
        raise RequestError("invalid-position-or-move", str(exc)) from None
    return {"moves": [m.uci() for m in board.legal_moves()]}


class InferenceServer:
    def __init__(self, bundle: ModelBundle, host: str = "127.0.0.1",
                 port: int = 8080):
        self.bundle = bundle
        self.model_id = bundle.model_id()
        outer = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def _send(self, status: int, body: dict) -> None:
                blob = json.dumps(body).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(blob)))
                self.send_header("Access-Control-Allow-Origin", "*")
                self.end_headers()
                self.wfile.write(blob)

            def log_message(self, fmt, *args):
                pass

            def do_OPTIONS(self):
                self.send_response(204)
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods",
                                 "GET, POST, OPTIONS")
                self.send_header("Content-Length", "0")
                self.end_headers()

            def do_GET(self):
                if self.path == "/api/health":
                    self._send(200, {"status": "ok",
                                     "model_id": outer.model_id})
                else:
                    self._send(404, {"error": {"kind": "not-found",
                                               "detail": self.path}})

            def do_POST(self):
                try:
                    length = int(self.headers.get("Content-Length", "0"))
                    raw = self.rfile.read(length)
                    try:
                        payload = json.loads(raw.decode("utf-8")) if raw else {}
                    except json.JSONDecodeError as exc:
                        raise RequestError("bad-json", str(exc)) from None
                    if self.path == "/api/comment":
                        self._send(200, _comment_response(
                            outer.bundle, payload, outer.model_id))
                    elif self.path == "/api/legal":
                        self._send(200, _legal_response(payload))
                    else:
                        self._send(404, {"error": {"kind": "not-found",
                                                   "detail": self.path}})
                except RequestError as exc:
                    self._send(400, exc.payload())
                except Exception as exc:  # noqa: BLE001 - never crash the server
                    self._send(500, {"error": {"kind": "internal",
                                               "detail": str(exc)}})

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self.port = self._httpd.server_address[1]
        self._thread: Optional[threading.Thread] = None

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def start_background(self) -> None:
        self._thread = threading.Thread(target=self._httpd.serve_forever,
                                        daemon=True)
        self._thread.start()

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
