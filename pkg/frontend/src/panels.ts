/**
 * Commentary tabs, the what-if overlay and the rollout preview list.
 *
 * The rollout list previews positions by replaying server moves locally;
 * previews never mutate the session. Tabs without a model (or with a
 * structured server error) render disabled with the server's reason.
 */

import { Session } from "./session.js";
import { ALL_CATEGORIES } from "./types.js";

export class CommentPanel {
  readonly root: HTMLElement;
  active: string = ALL_CATEGORIES[0];

  constructor(root: HTMLElement) {
    this.root = root;
  }

  render(session: Session): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    const resp = session.state.lastResponse;
    const tabs = doc.createElement("div");
    tabs.className = "tabs";
    const body = doc.createElement("div");
    body.className = "tab-body";
    for (const cat of ALL_CATEGORIES) {
      const tab = doc.createElement("button");
      tab.className = "tab";
      tab.dataset.category = cat;
      tab.textContent = cat;
      const errorText = resp?.errors?.[cat];
      if (errorText !== undefined) {
        tab.classList.add("disabled");
        tab.title = errorText;
      }
      if (cat === this.active) tab.classList.add("active");
      tab.addEventListener("click", () => {
        this.active = cat;
        this.render(session);
      });
      tabs.appendChild(tab);
    }
    const text = doc.createElement("p");
    text.className = "comment-text";
    if (!resp) {
      text.textContent = "play a move to get commentary";
    } else if (resp.errors[this.active] !== undefined) {
      text.textContent = `unavailable: ${resp.errors[this.active]}`;
      text.classList.add("disabled");
    } else {
      text.textContent = resp.comments[this.active] ?? "";
    }
    body.appendChild(text);
    this.root.appendChild(tabs);
    this.root.appendChild(body);
  }
}

export class WhatIfOverlay {
  readonly root: HTMLElement;
  visible = false;

  constructor(root: HTMLElement) {
    this.root = root;
  }

  render(session: Session, onToggle: (visible: boolean) => void): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    const data = session.whatIf();
    if (!data) {
      this.root.classList.add("hidden");
      return;
    }
    this.root.classList.remove("hidden");
    const button = doc.createElement("button");
    button.className = "what-if-toggle";
    button.textContent = this.visible ? "hide what-if" : "what if?";
    button.addEventListener("click", () => {
      this.visible = !this.visible;
      onToggle(this.visible);
      this.render(session, onToggle);
    });
    this.root.appendChild(button);
    if (!this.visible) return;

    const box = doc.createElement("div");
    box.className = "what-if-box";
    const alt = doc.createElement("p");
    alt.className = "what-if-alt";
    alt.textContent = data.degenerate
      ? "only legal move"
      : `engine preferred ${data.alternative}`;
    box.appendChild(alt);
    const columns = doc.createElement("div");
    columns.className = "what-if-columns";
    for (const [title, body] of [
      ["played", data.playedText],
      ["comparison", data.comparisonText],
    ] as const) {
      const col = doc.createElement("div");
      const h = doc.createElement("h4");
      h.textContent = title;
      const p = doc.createElement("p");
      p.textContent = body;
      col.appendChild(h);
      col.appendChild(p);
      columns.appendChild(col);
    }
    box.appendChild(columns);
    this.root.appendChild(box);
  }
}

export class RolloutPanel {
  readonly root: HTMLElement;
  previewPly: number | null = null;

  constructor(root: HTMLElement) {
    this.root = root;
  }

  render(session: Session, onPreview: (fen: string | null) => void): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    const resp = session.state.lastResponse;
    if (!resp || resp.rollout.length === 0) {
      this.root.classList.add("hidden");
      this.previewPly = null;
      return;
    }
    this.root.classList.remove("hidden");
    const title = doc.createElement("h4");
    title.textContent = "engine line";
    this.root.appendChild(title);
    const list = doc.createElement("ol");
    list.className = "rollout-list";
    resp.rollout.forEach((uci, i) => {
      const item = doc.createElement("li");
      const btn = doc.createElement("button");
      btn.className = "rollout-ply";
      btn.textContent = uci;
      if (this.previewPly === i + 1) btn.classList.add("active");
      btn.addEventListener("click", () => {
        this.previewPly = i + 1;
        onPreview(session.rolloutPreviewFen(i + 1));
        this.render(session, onPreview);
      });
      item.appendChild(btn);
      list.appendChild(item);
    });
    this.root.appendChild(list);
    if (this.previewPly !== null) {
      const back = doc.createElement("button");
      back.className = "rollout-back";
      back.textContent = "back to game";
      back.addEventListener("click", () => {
        this.previewPly = null;
        onPreview(null);
        this.render(session, onPreview);
      });
      this.root.appendChild(back);
    }
  }
}

export function renderHistory(root: HTMLElement, history: string[]): void {
  root.textContent = "";
  const doc = root.ownerDocument;
  const title = doc.createElement("h4");
  title.textContent = "moves";
  root.appendChild(title);
  const list = doc.createElement("ol");
  list.className = "history-list";
  for (let i = 0; i < history.length; i += 2) {
    const item = doc.createElement("li");
    item.textContent = history.slice(i, i + 2).join(" ");
    list.appendChild(item);
  }
  root.appendChild(list);
}
