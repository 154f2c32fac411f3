/**
 * Board rendering and move input (click-to-select or drag-and-drop).
 *
 * Highlights come exclusively from the server-reported legal set carried by
 * the session; the renderer never derives chess rules.
 */

import { parseFen, squareName } from "./fen.js";
import { Session } from "./session.js";

const GLYPHS: Record<string, string> = {
  K: "♔", Q: "♕", R: "♖", B: "♗", N: "♘", P: "♙",
  k: "♚", q: "♛", r: "♜", b: "♝", n: "♞", p: "♟",
};

export interface BoardViewModel {
  /** Piece letter (or null) per square name. */
  cells: Record<string, string | null>;
  selected: string | null;
  highlights: string[];
  winRate: number; // White's perspective, drives the evaluation bar
  arrow: { from: string; to: string } | null;
}

export function buildViewModel(
  session: Session,
  selected: string | null,
  arrow: { from: string; to: string } | null = null,
  fenOverride: string | null = null,
): BoardViewModel {
  const pos = parseFen(fenOverride ?? session.state.fen);
  const cells: Record<string, string | null> = {};
  for (let i = 0; i < 64; i++) {
    cells[squareName(i)] = pos.board[i];
  }
  const highlights = selected && !fenOverride ? session.targetsFor(selected) : [];
  const resp = session.state.lastResponse;
  return {
    cells,
    selected,
    highlights,
    winRate: resp ? resp.win_rate_after : 0.5,
    arrow,
  };
}

export class BoardView {
  readonly root: HTMLElement;
  private onMove: (from: string, to: string) => void;
  private onSelect: () => void;
  private selected: string | null = null;

  constructor(root: HTMLElement, onMove: (from: string, to: string) => void,
              onSelect: () => void = () => {}) {
    this.root = root;
    this.onMove = onMove;
    this.onSelect = onSelect;
  }

  get selectedSquare(): string | null {
    return this.selected;
  }

  clearSelection(): void {
    this.selected = null;
  }

  select(square: string | null): void {
    this.selected = square;
  }

  render(vm: BoardViewModel): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    const grid = doc.createElement("div");
    grid.className = "board-grid";
    for (let rank = 7; rank >= 0; rank--) {
      for (let file = 0; file < 8; file++) {
        const name = squareName(rank * 8 + file);
        const cell = doc.createElement("div");
        cell.className = "square " + (((rank + file) % 2 === 0) ? "dark" : "light");
        cell.dataset.square = name;
        const piece = vm.cells[name];
        if (piece) {
          const span = doc.createElement("span");
          span.className = "piece " + (piece === piece.toUpperCase() ? "white" : "black");
          span.textContent = GLYPHS[piece] ?? piece;
          span.draggable = true;
          cell.appendChild(span);
        }
        if (vm.selected === name) cell.classList.add("selected");
        if (vm.highlights.includes(name)) cell.classList.add("target");
        if (vm.arrow && vm.arrow.from === name) cell.classList.add("arrow-from");
        if (vm.arrow && vm.arrow.to === name) cell.classList.add("arrow-to");
        cell.addEventListener("click", () => this.handleClick(name, vm));
        cell.addEventListener("dragstart", () => {
          this.selected = name;
          this.onSelect();
        });
        cell.addEventListener("dragover", (ev) => ev.preventDefault());
        cell.addEventListener("drop", (ev) => {
          ev.preventDefault();
          if (this.selected && this.selected !== name) {
            const from = this.selected;
            this.selected = null;
            this.onMove(from, name);
          }
        });
        grid.appendChild(cell);
      }
    }
    this.root.appendChild(grid);
  }

  private handleClick(square: string, vm: BoardViewModel): void {
    if (this.selected === null) {
      if (vm.cells[square]) {
        this.selected = square;
        this.onSelect();
      }
    } else if (this.selected === square) {
      this.selected = null;
      this.onSelect();
    } else {
      const from = this.selected;
      this.selected = null;
      this.onMove(from, square);
    }
  }
}

export function renderWinBar(root: HTMLElement, winRate: number): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  const bar = doc.createElement("div");
  bar.className = "win-bar";
  const fill = doc.createElement("div");
  fill.className = "win-bar-fill";
  fill.style.width = `${Math.round(winRate * 100)}%`;
  bar.title = `white win rate ${(winRate * 100).toFixed(1)}%`;
  bar.appendChild(fill);
  const label = doc.createElement("span");
  label.className = "win-bar-label";
  label.textContent = `${(winRate * 100).toFixed(1)}%`;
  root.appendChild(bar);
  root.appendChild(label);
}
