/**
 * Session state machine.
 *
 * The session holds the current FEN, the move history and the last server
 * response. Moves are validated against the server-reported legal set, then
 * applied optimistically, confirmed by the comment request, and rolled back
 * on any failure. At most one request is in flight; input during a flight is
 * blocked. After every interaction the session FEN must equal the history
 * replayed from the start position, and that invariant is asserted.
 */

import { ApiClient, ApiError } from "./api.js";
import { applyUci, parseFen, emitFen, replayFen, START_FEN } from "./fen.js";
import { ALL_CATEGORIES, CommentResponse } from "./types.js";

export interface SessionState {
  fen: string;
  history: string[];
  lastResponse: CommentResponse | null;
  categories: string[];
  pending: boolean;
  legalMoves: string[];
  message: string;
  /** Inputs of the last failed submit, so the UI can offer a retry. */
  retryable: { from: string; to: string; promotion?: string } | null;
}

export interface SubmitResult {
  sent: boolean;
  ok: boolean;
  reason?: string;
}

export type Listener = (state: SessionState) => void;

export class ConsistencyError extends Error {}

export class Session {
  readonly api: ApiClient;
  state: SessionState;
  horizon?: number;
  private listeners: Listener[] = [];

  constructor(api: ApiClient, categories: string[] = [...ALL_CATEGORIES]) {
    this.api = api;
    this.state = {
      fen: START_FEN,
      history: [],
      lastResponse: null,
      categories,
      pending: false,
      legalMoves: [],
      message: "",
      retryable: null,
    };
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    this.assertConsistent();
    for (const l of this.listeners) l(this.state);
  }

  /** Invariant: the session FEN is exactly the replayed history. */
  assertConsistent(): void {
    const replayed = replayFen(this.state.history);
    if (replayed !== this.state.fen) {
      throw new ConsistencyError(
        `session fen diverged from history: ${this.state.fen} != ${replayed}`,
      );
    }
  }

  async init(): Promise<void> {
    this.state.legalMoves = await this.api.legal(this.state.fen);
    this.emit();
  }

  /** Legal target squares for a selected source square. */
  targetsFor(from: string): string[] {
    return this.state.legalMoves
      .filter((m) => m.startsWith(from))
      .map((m) => m.slice(2, 4));
  }

  private resolveUci(from: string, to: string, promotion?: string): string | null {
    const plain = from + to;
    if (promotion && this.state.legalMoves.includes(plain + promotion)) {
      return plain + promotion;
    }
    if (this.state.legalMoves.includes(plain)) {
      return plain;
    }
    // Promotion move without an explicit choice defaults to the queen.
    if (!promotion && this.state.legalMoves.includes(plain + "q")) {
      return plain + "q";
    }
    return null;
  }

  async submitMove(from: string, to: string, promotion?: string): Promise<SubmitResult> {
    if (this.state.pending) {
      this.state.message = "a request is already in flight";
      this.emit();
      return { sent: false, ok: false, reason: "pending" };
    }
    const uci = this.resolveUci(from, to, promotion);
    if (uci === null) {
      this.state.message = `illegal move: ${from}${to}`;
      this.emit();
      return { sent: false, ok: false, reason: "illegal" };
    }

    const prevFen = this.state.fen;
    const prevLegal = this.state.legalMoves;
    // Optimistic local application for immediate feedback.
    this.state.fen = emitFen(applyUci(parseFen(prevFen), uci));
    this.state.history = [...this.state.history, uci];
    this.state.pending = true;
    this.state.message = "";
    this.state.retryable = null;
    this.emit();

    try {
      const response = await this.api.comment({
        fen: prevFen,
        move: uci,
        categories: this.state.categories,
        horizon: this.horizon,
      });
      this.state.lastResponse = response;
      this.state.legalMoves = await this.api.legal(this.state.fen);
      this.state.pending = false;
      this.emit();
      return { sent: true, ok: true };
    } catch (err) {
      // Roll back the optimistic move; keep a retry affordance for network
      // failures (validation errors are not retryable as-is).
      this.state.fen = prevFen;
      this.state.history = this.state.history.slice(0, -1);
      this.state.legalMoves = prevLegal;
      this.state.pending = false;
      if (err instanceof ApiError) {
        this.state.message = `rejected: ${err.message}`;
      } else {
        this.state.message = "network error - retry";
        this.state.retryable = { from, to, promotion };
      }
      this.emit();
      return { sent: true, ok: false, reason: this.state.message };
    }
  }

  async retry(): Promise<SubmitResult> {
    const again = this.state.retryable;
    if (!again) {
      return { sent: false, ok: false, reason: "nothing to retry" };
    }
    this.state.retryable = null;
    return this.submitMove(again.from, again.to, again.promotion);
  }

  /** Data for the what-if overlay; null until a response has arrived. */
  whatIf(): {
    alternative: string;
    degenerate: boolean;
    playedText: string;
    comparisonText: string;
  } | null {
    const resp = this.state.lastResponse;
    if (!resp || !resp.best_alternative) return null;
    return {
      alternative: resp.best_alternative,
      degenerate: resp.alternative_degenerate,
      playedText: resp.comments["description"] ?? "",
      comparisonText: resp.alternative_degenerate
        ? "only legal move"
        : (resp.comments["comparison"] ?? resp.errors["comparison"] ?? ""),
    };
  }

  /**
   * FEN after locally replaying the first `plies` rollout moves from the
   * current position. Pure preview: session state is untouched.
   */
  rolloutPreviewFen(plies: number): string | null {
    const resp = this.state.lastResponse;
    if (!resp || resp.rollout.length === 0) return null;
    const line = resp.rollout.slice(0, plies);
    return replayFen(line, this.state.fen);
  }
}
