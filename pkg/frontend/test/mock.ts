/**
 * Mock fetch backed by recorded real-server responses (fixtures/session.json).
 * Counts requests so tests can assert that illegal input sends nothing.
 */

import fixture from "./fixtures/session.json";
import type { FetchLike } from "../src/api.js";

export interface MockServer {
  fetch: FetchLike;
  calls: { url: string; body: unknown }[];
  failNext: { times: number; kind: "network" | "http400" };
  fixture: typeof fixture;
}

function jsonResponse(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => body,
  } as unknown as Response;
}

export function makeMockServer(): MockServer {
  const mock: MockServer = {
    calls: [],
    failNext: { times: 0, kind: "network" },
    fixture,
    fetch: async (url: string, init?: RequestInit) => {
      const body = init?.body ? JSON.parse(String(init.body)) : null;
      mock.calls.push({ url, body });
      if (mock.failNext.times > 0) {
        mock.failNext.times -= 1;
        if (mock.failNext.kind === "network") {
          throw new TypeError("fetch failed");
        }
        return jsonResponse(400, {
          error: { kind: "invalid-position-or-move", detail: "rejected by test" },
        });
      }
      if (url.endsWith("/api/health")) {
        return jsonResponse(200, { status: "ok", model_id: fixture.model_id });
      }
      if (url.endsWith("/api/legal")) {
        const moves = (fixture.legal as Record<string, string[]>)[body.fen];
        if (!moves) {
          return jsonResponse(400, {
            error: { kind: "invalid-position-or-move", detail: `unknown fen ${body.fen}` },
          });
        }
        return jsonResponse(200, { moves });
      }
      if (url.endsWith("/api/comment")) {
        const key = `${body.fen}|${body.move}`;
        const resp = (fixture.comments as Record<string, unknown>)[key];
        if (!resp) {
          const legal = (fixture.legal as Record<string, string[]>)[body.fen] ?? [];
          if (!legal.includes(body.move)) {
            return jsonResponse(400, {
              error: { kind: "invalid-position-or-move", detail: `illegal move ${body.move}` },
            });
          }
          return jsonResponse(400, {
            error: { kind: "bad-request", detail: `unscripted move ${key}` },
          });
        }
        return jsonResponse(200, resp);
      }
      return jsonResponse(404, { error: { kind: "not-found", detail: url } });
    },
  };
  return mock;
}

/** The scripted ten-move line the fixture was recorded from. */
export const SCRIPT_LINE = [
  "e2e4", "c7c5", "g1f3", "d7d6", "d2d4",
  "c5d4", "f3d4", "g8f6", "b1c3", "a7a6",
];
