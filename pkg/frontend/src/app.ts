/** Application glue: wires the session to the board and panels. */

import { ApiClient } from "./api.js";
import { BoardView, buildViewModel, renderWinBar } from "./board.js";
import { CommentPanel, RolloutPanel, WhatIfOverlay, renderHistory } from "./panels.js";
import { Session } from "./session.js";

export interface AppElements {
  board: HTMLElement;
  winBar: HTMLElement;
  comments: HTMLElement;
  whatIf: HTMLElement;
  rollout: HTMLElement;
  history: HTMLElement;
  status: HTMLElement;
}

export class App {
  readonly session: Session;
  readonly boardView: BoardView;
  private readonly el: AppElements;
  private readonly comments: CommentPanel;
  private readonly whatIf: WhatIfOverlay;
  private readonly rollout: RolloutPanel;
  private previewFen: string | null = null;
  private showArrow = false;

  constructor(api: ApiClient, el: AppElements) {
    this.el = el;
    this.session = new Session(api);
    this.boardView = new BoardView(
      el.board,
      (from, to) => {
        void this.session.submitMove(from, to);
      },
      () => this.draw(),
    );
    this.comments = new CommentPanel(el.comments);
    this.whatIf = new WhatIfOverlay(el.whatIf);
    this.rollout = new RolloutPanel(el.rollout);
    this.session.subscribe(() => {
      // New game state invalidates any local preview.
      this.previewFen = null;
      this.rollout.previewPly = null;
      this.draw();
    });
  }

  async start(): Promise<void> {
    await this.session.init();
    this.draw();
  }

  draw(): void {
    const resp = this.session.state.lastResponse;
    const arrow =
      this.showArrow && resp && !this.previewFen
        ? {
            from: resp.best_alternative.slice(0, 2),
            to: resp.best_alternative.slice(2, 4),
          }
        : null;
    const vm = buildViewModel(
      this.session,
      this.boardView.selectedSquare,
      arrow,
      this.previewFen,
    );
    this.boardView.render(vm);
    renderWinBar(this.el.winBar, vm.winRate);
    this.comments.render(this.session);
    this.whatIf.render(this.session, (visible) => {
      this.showArrow = visible;
      this.draw();
    });
    this.rollout.render(this.session, (fen) => {
      this.previewFen = fen;
      this.draw();
    });
    renderHistory(this.el.history, this.session.state.history);
    const message = this.session.state.message;
    this.el.status.textContent = this.session.state.pending
      ? "thinking..."
      : message;
    if (this.session.state.retryable) {
      const retry = this.el.status.ownerDocument.createElement("button");
      retry.textContent = "retry";
      retry.addEventListener("click", () => void this.session.retry());
      this.el.status.appendChild(retry);
    }
  }
}

export function mount(doc: Document, baseUrl: string): App {
  const byId = (id: string): HTMLElement => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  };
  const app = new App(new ApiClient(baseUrl), {
    board: byId("board"),
    winBar: byId("win-bar"),
    comments: byId("comments"),
    whatIf: byId("what-if"),
    rollout: byId("rollout"),
    history: byId("history"),
    status: byId("status"),
  });
  void app.start();
  return app;
}
