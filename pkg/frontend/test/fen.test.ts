import { describe, expect, it } from "vitest";

import { applyUci, emitFen, parseFen, replayFen, squareIndex, squareName, START_FEN } from "../src/fen.js";

describe("fen codec", () => {
  it("round-trips the start position", () => {
    expect(emitFen(parseFen(START_FEN))).toBe(START_FEN);
  });

  it("round-trips arbitrary positions", () => {
    const fens = [
      "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
      "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e3 0 1",
      "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 12 34",
    ];
    for (const fen of fens) {
      expect(emitFen(parseFen(fen))).toBe(fen);
    }
  });

  it("rejects malformed records", () => {
    expect(() => parseFen("only three fields")).toThrow();
    expect(() => parseFen("8/8/8/8/8/8/8 w - - 0 1")).toThrow();
  });

  it("square naming is involutive", () => {
    for (let i = 0; i < 64; i++) {
      expect(squareIndex(squareName(i))).toBe(i);
    }
  });
});

describe("applyUci", () => {
  it("plays e2e4 with the exact bookkeeping", () => {
    const after = applyUci(parseFen(START_FEN), "e2e4");
    expect(emitFen(after)).toBe(
      "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e3 0 1",
    );
  });

  it("captures reset the halfmove clock", () => {
    let pos = parseFen(START_FEN);
    for (const uci of ["e2e4", "d7d5", "g1f3", "g8f6"]) {
      pos = applyUci(pos, uci);
    }
    expect(pos.halfmove).toBe(2);
    pos = applyUci(pos, "e4d5");
    expect(pos.halfmove).toBe(0);
    expect(pos.board[squareIndex("d5")]).toBe("P");
  });

  it("handles kingside castling, moving the rook", () => {
    const pos = parseFen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
    const after = applyUci(pos, "e1g1");
    expect(after.board[squareIndex("g1")]).toBe("K");
    expect(after.board[squareIndex("f1")]).toBe("R");
    expect(after.board[squareIndex("h1")]).toBeNull();
    expect(after.castling).toBe("kq");
  });

  it("handles queenside castling for black", () => {
    const pos = parseFen("r3k2r/8/8/8/8/8/8/R3K2R b KQkq - 0 1");
    const after = applyUci(pos, "e8c8");
    expect(after.board[squareIndex("c8")]).toBe("k");
    expect(after.board[squareIndex("d8")]).toBe("r");
    expect(after.castling).toBe("KQ");
  });

  it("clears castling rights when a rook is captured on its corner", () => {
    const pos = parseFen("r3k2r/8/8/8/8/8/6q1/R3K2R b KQkq - 0 1");
    const after = applyUci(pos, "g2h1");
    expect(after.castling).toBe("Qkq");
  });

  it("performs en passant, removing the bypassed pawn", () => {
    let pos = parseFen(START_FEN);
    for (const uci of ["e2e4", "a7a6", "e4e5", "d7d5"]) {
      pos = applyUci(pos, uci);
    }
    expect(pos.ep).toBe("d6");
    pos = applyUci(pos, "e5d6");
    expect(pos.board[squareIndex("d5")]).toBeNull();
    expect(pos.board[squareIndex("d6")]).toBe("P");
  });

  it("promotes with the chosen piece", () => {
    const pos = parseFen("8/P6k/8/8/8/8/8/K7 w - - 0 1");
    expect(applyUci(pos, "a7a8q").board[squareIndex("a8")]).toBe("Q");
    expect(applyUci(pos, "a7a8n").board[squareIndex("a8")]).toBe("N");
  });

  it("increments the fullmove number after black moves", () => {
    let pos = parseFen(START_FEN);
    pos = applyUci(pos, "e2e4");
    expect(pos.fullmove).toBe(1);
    pos = applyUci(pos, "e7e5");
    expect(pos.fullmove).toBe(2);
  });
});

describe("replayFen", () => {
  it("replays a line deterministically", () => {
    const line = ["e2e4", "c7c5", "g1f3", "d7d6"];
    expect(replayFen(line)).toBe(replayFen(line));
    expect(replayFen([])).toBe(START_FEN);
  });
});
