// @vitest-environment happy-dom
import { beforeEach, describe, expect, it } from "vitest";

import { App } from "../src/app.js";
import { ApiClient } from "../src/api.js";
import { makeMockServer, type MockServer } from "./mock.js";

function settle(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function buildDom(): void {
  document.body.innerHTML = `
    <div id="board"></div><div id="win-bar"></div><div id="status"></div>
    <div id="history"></div><div id="comments"></div><div id="what-if"></div>
    <div id="rollout"></div>`;
}

function elements() {
  const byId = (id: string) => document.getElementById(id) as HTMLElement;
  return {
    board: byId("board"),
    winBar: byId("win-bar"),
    comments: byId("comments"),
    whatIf: byId("what-if"),
    rollout: byId("rollout"),
    history: byId("history"),
    status: byId("status"),
  };
}

function square(name: string): HTMLElement {
  const node = document.querySelector(`[data-square="${name}"]`);
  if (!node) throw new Error(`no square ${name}`);
  return node as HTMLElement;
}

describe("rendered client against the mocked server", () => {
  let mock: MockServer;
  let app: App;

  beforeEach(async () => {
    buildDom();
    mock = makeMockServer();
    app = new App(new ApiClient("http://test", mock.fetch), elements());
    await app.start();
  });

  it("renders 64 squares with the initial pieces", () => {
    expect(document.querySelectorAll(".square").length).toBe(64);
    expect(square("e2").textContent).toBe("♙");
    expect(square("e8").textContent).toBe("♚");
    expect(square("e4").textContent).toBe("");
  });

  it("click-click move updates the board and populates the comment panel", async () => {
    square("e2").click();
    // Selecting a piece redraws immediately with the server-set highlights.
    expect(square("e2").classList.contains("selected")).toBe(true);
    const highlighted = Array.from(document.querySelectorAll(".square.target"))
      .map((n) => (n as HTMLElement).dataset.square);
    expect(highlighted.sort()).toEqual(["e3", "e4"]);

    square("e4").click();
    await settle();
    await settle();
    expect(app.session.state.history).toEqual(["e2e4"]);
    expect(square("e4").textContent).toBe("♙");
    expect(square("e2").textContent).toBe("");
    const text = document.querySelector(".comment-text") as HTMLElement;
    expect(text.textContent!.length).toBeGreaterThan(0);
    expect(text.textContent).not.toContain("play a move");
  });

  it("an illegal drag leaves the DOM board unchanged and sends nothing", async () => {
    const before = mock.calls.filter((c) => c.url.endsWith("/api/comment")).length;
    square("e2").click();
    square("e5").click();
    await settle();
    expect(mock.calls.filter((c) => c.url.endsWith("/api/comment")).length).toBe(before);
    expect(square("e2").textContent).toBe("♙");
    expect(app.session.state.history).toEqual([]);
  });

  it("shows the what-if arrow for the engine alternative", async () => {
    square("e2").click();
    square("e4").click();
    await settle();
    await settle();
    const toggle = document.querySelector(".what-if-toggle") as HTMLElement;
    expect(toggle).not.toBeNull();
    toggle.click();
    const alt = app.session.state.lastResponse!.best_alternative;
    expect(square(alt.slice(0, 2)).classList.contains("arrow-from")).toBe(true);
    expect(square(alt.slice(2, 4)).classList.contains("arrow-to")).toBe(true);
    // Comparison text is shown verbatim next to the played move's text.
    const columns = document.querySelectorAll(".what-if-columns p");
    expect((columns[1] as HTMLElement).textContent).toBe(
      app.session.state.lastResponse!.comments["comparison"],
    );
  });

  it("rollout preview renders and back returns to the game position", async () => {
    square("e2").click();
    square("e4").click();
    await settle();
    await settle();
    const rollout = app.session.state.lastResponse!.rollout;
    expect(rollout.length).toBeGreaterThan(0);
    const plies = document.querySelectorAll(".rollout-ply");
    expect(plies.length).toBe(rollout.length);

    const fenBefore = app.session.state.fen;
    (plies[0] as HTMLElement).click();
    // Preview shows the rollout move applied, session untouched.
    expect(app.session.state.fen).toBe(fenBefore);
    const back = document.querySelector(".rollout-back") as HTMLElement;
    expect(back).not.toBeNull();
    back.click();
    expect(app.session.state.fen).toBe(fenBefore);
    expect(app.session.state.history).toEqual(["e2e4"]);
  });

  it("win bar tracks the response win rate", async () => {
    square("e2").click();
    square("e4").click();
    await settle();
    await settle();
    const fill = document.querySelector(".win-bar-fill") as HTMLElement;
    const expected = Math.round(app.session.state.lastResponse!.win_rate_after * 100);
    expect(fill.style.width).toBe(`${expected}%`);
  });

  it("renders all five tabs and disables ones the server reports errors for", async () => {
    square("e2").click();
    square("e4").click();
    await settle();
    await settle();
    // Simulate a category the bundle cannot serve.
    const resp = app.session.state.lastResponse!;
    delete resp.comments["planning"];
    resp.errors["planning"] = "category not in bundle";
    app.draw();
    const tabs = Array.from(document.querySelectorAll(".tab")) as HTMLElement[];
    expect(tabs.map((t) => t.dataset.category)).toEqual([
      "description", "quality", "comparison", "planning", "contexts",
    ]);
    const planning = tabs.find((t) => t.dataset.category === "planning")!;
    expect(planning.classList.contains("disabled")).toBe(true);
    planning.click();
    const text = document.querySelector(".comment-text") as HTMLElement;
    expect(text.textContent).toContain("unavailable");
    expect(text.classList.contains("disabled")).toBe(true);
  });
});
