/**
 * Mechanical position model: FEN parsing/serialization and UCI application.
 *
 * The client never decides legality (the server is the rules authority);
 * applyUci performs the board mechanics of a move already known to be legal,
 * keeping every FEN field in sync so a replayed history reproduces the
 * session FEN exactly.
 */

export const START_FEN =
  "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

export interface Position {
  /** 64 cells indexed rank*8+file with a1 = 0; piece letters or null. */
  board: (string | null)[];
  turn: "w" | "b";
  castling: string; // subset of "KQkq" in that order, or "-"
  ep: string; // en-passant target square name, or "-"
  halfmove: number;
  fullmove: number;
}

export function squareIndex(name: string): number {
  const file = name.charCodeAt(0) - 97;
  const rank = name.charCodeAt(1) - 49;
  if (file < 0 || file > 7 || rank < 0 || rank > 7) {
    throw new Error(`bad square: ${name}`);
  }
  return rank * 8 + file;
}

export function squareName(index: number): string {
  return String.fromCharCode(97 + (index & 7)) + String.fromCharCode(49 + (index >> 3));
}

export function parseFen(fen: string): Position {
  const fields = fen.trim().split(/\s+/);
  if (fields.length !== 6) {
    throw new Error(`expected 6 FEN fields, got ${fields.length}`);
  }
  const [placement, turn, castling, ep, halfmove, fullmove] = fields;
  const rows = placement.split("/");
  if (rows.length !== 8) {
    throw new Error("expected 8 ranks");
  }
  const board: (string | null)[] = new Array(64).fill(null);
  for (let r = 0; r < 8; r++) {
    const rank = 7 - r;
    let file = 0;
    for (const ch of rows[r]) {
      if (ch >= "1" && ch <= "8") {
        file += Number(ch);
      } else {
        if (!"pnbrqkPNBRQK".includes(ch) || file > 7) {
          throw new Error(`bad placement at rank ${rank + 1}`);
        }
        board[rank * 8 + file] = ch;
        file += 1;
      }
    }
    if (file !== 8) {
      throw new Error(`rank ${rank + 1} has ${file} files`);
    }
  }
  if (turn !== "w" && turn !== "b") {
    throw new Error(`bad side to move: ${turn}`);
  }
  return {
    board,
    turn,
    castling: castling === "" ? "-" : castling,
    ep,
    halfmove: Number(halfmove),
    fullmove: Number(fullmove),
  };
}

export function emitFen(pos: Position): string {
  const rows: string[] = [];
  for (let rank = 7; rank >= 0; rank--) {
    let row = "";
    let empty = 0;
    for (let file = 0; file < 8; file++) {
      const piece = pos.board[rank * 8 + file];
      if (piece === null) {
        empty += 1;
      } else {
        if (empty > 0) {
          row += String(empty);
          empty = 0;
        }
        row += piece;
      }
    }
    if (empty > 0) row += String(empty);
    rows.push(row);
  }
  return [
    rows.join("/"),
    pos.turn,
    pos.castling || "-",
    pos.ep,
    String(pos.halfmove),
    String(pos.fullmove),
  ].join(" ");
}

function dropCastling(castling: string, letters: string): string {
  let out = "";
  for (const ch of castling) {
    if (ch !== "-" && !letters.includes(ch)) out += ch;
  }
  return out === "" ? "-" : out;
}

/** Apply a (legal) UCI move, returning the successor position. */
export function applyUci(pos: Position, uci: string): Position {
  if (!/^[a-h][1-8][a-h][1-8][qrbn]?$/.test(uci)) {
    throw new Error(`bad UCI move: ${uci}`);
  }
  const from = squareIndex(uci.slice(0, 2));
  const to = squareIndex(uci.slice(2, 4));
  const promo = uci.length === 5 ? uci[4] : null;
  const board = pos.board.slice();
  const piece = board[from];
  if (piece === null) {
    throw new Error(`no piece on ${uci.slice(0, 2)}`);
  }
  const white = piece === piece.toUpperCase();
  const isPawn = piece.toLowerCase() === "p";
  let captured = board[to] !== null;

  board[from] = null;
  board[to] = promo ? (white ? promo.toUpperCase() : promo) : piece;

  // En passant: a pawn moving diagonally onto the ep square captures the
  // pawn behind the target.
  if (isPawn && squareName(to) === pos.ep && (to & 7) !== (from & 7) && !captured) {
    const capSq = to + (white ? -8 : 8);
    board[capSq] = null;
    captured = true;
  }
  // Castling: the king moves two files; hop the rook over.
  if (piece.toLowerCase() === "k" && Math.abs((to & 7) - (from & 7)) === 2) {
    const rank = from & ~7;
    if ((to & 7) === 6) {
      board[rank + 5] = board[rank + 7];
      board[rank + 7] = null;
    } else {
      board[rank + 3] = board[rank + 0];
      board[rank + 0] = null;
    }
  }

  let castling = pos.castling;
  if (piece === "K") castling = dropCastling(castling, "KQ");
  if (piece === "k") castling = dropCastling(castling, "kq");
  for (const sq of [from, to]) {
    if (sq === 0) castling = dropCastling(castling, "Q");
    if (sq === 7) castling = dropCastling(castling, "K");
    if (sq === 56) castling = dropCastling(castling, "q");
    if (sq === 63) castling = dropCastling(castling, "k");
  }

  const doublePush = isPawn && Math.abs(to - from) === 16;
  return {
    board,
    turn: pos.turn === "w" ? "b" : "w",
    castling,
    ep: doublePush ? squareName((from + to) / 2) : "-",
    halfmove: isPawn || captured ? 0 : pos.halfmove + 1,
    fullmove: pos.fullmove + (pos.turn === "b" ? 1 : 0),
  };
}

/** FEN after applying `history` (UCI moves) from the start position. */
export function replayFen(history: string[], fromFen: string = START_FEN): string {
  let pos = parseFen(fromFen);
  for (const uci of history) {
    pos = applyUci(pos, uci);
  }
  return emitFen(pos);
}
