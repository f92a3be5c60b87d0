/** Wire types for the game server's line-JSON protocol (v1).
 *
 * Every response carries `v: 1`. The client treats these payloads as the
 * single source of truth: nothing here is recomputed on the client side.
 */

/** Ascending vertex ids; length is the board arity (3 for the built-ins). */
export type Edge = number[];

/** Pair on an x-board: the two non-center vertices of an edge through x. */
export type Pair = number[];

export type Player = 1 | 2;

export type Request =
  | { cmd: "new_game"; target: string; p2?: string; horizon?: number | null; xboard?: number | null }
  | { cmd: "move"; e: Edge; xboard?: number | null }
  | { cmd: "hint" }
  | { cmd: "resign" }
  | { cmd: "snapshot"; xboard?: number | null };

export type GameStatus = {
  kind: "ongoing" | "p1win" | "p2win" | "draw";
  resigned?: boolean;
  /** Winning copy as [targetVertex, boardVertex] pairs. */
  embedding?: number[][];
};

/** A copy one edge short of completion. */
export type ThreatJson = {
  /** The claimed edges of the near-copy. */
  edges: Edge[];
  /** The single missing edge that would finish it. */
  completing: Edge;
  /** True when the completion runs through an unseen vertex. */
  uses_fresh: boolean;
};

export type XBoardJson = {
  x: number;
  p1: Pair[];
  p2: Pair[];
};

export type StatePayload = {
  v: 1;
  type: "state";
  target: string;
  k: number;
  to_move: Player;
  status: GameStatus;
  pool_size: number;
  horizon: number | null;
  p1_edges: Edge[];
  p2_edges: Edge[];
  move_log: [Player, Edge][];
  threats: { p1: ThreatJson[]; p2: ThreatJson[] };
  measures: { p1: number; p2: number };
  edge_total: number;
  xboard?: XBoardJson;
};

export type ErrorPayload = {
  v: 1;
  type: "error";
  code:
    | "BadJSON"
    | "BadRequest"
    | "UnknownCommand"
    | "NoGame"
    | "UnknownTarget"
    | "NoStrategy"
    | "EdgeAlreadyClaimed"
    | "ArityMismatch"
    | "WrongTurn"
    | "GameOver"
    | "InapplicableState";
  message: string;
};

export type HintPayload = {
  v: 1;
  type: "hint";
  e: Edge;
};

export type Response = StatePayload | ErrorPayload | HintPayload;

export function isState(r: Response): r is StatePayload {
  return r.type === "state";
}

export function isError(r: Response): r is ErrorPayload {
  return r.type === "error";
}

/** Canonical edge text, e.g. "0 1 6"; used for captions and map keys. */
export function edgeKey(e: Edge): string {
  return e.join(" ");
}
