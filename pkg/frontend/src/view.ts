import type { Edge, Pair, StatePayload, ThreatJson } from "./protocol";
import { edgeKey } from "./protocol";

/** Seat colors, matching the convention used throughout the project's
 * diagrams: the human first seat draws violet, the engine blue. */
export const SEAT_COLOR = { p1: "#7c3aed", p2: "#2563eb" } as const;

export type Seat = "p1" | "p2";

export type Progress = {
  /** Best overlap the seat has toward a full copy. */
  value: number;
  /** Edges a full copy needs. */
  total: number;
  /** value / total, for bar widths. */
  frac: number;
};

/** Progress bars mirror the state's measures verbatim. */
export function progress(state: StatePayload, seat: Seat): Progress {
  const value = state.measures[seat];
  const total = state.edge_total;
  return { value, total, frac: total === 0 ? 0 : value / total };
}

export type ThreatOverlay = {
  /** Keys of claimed edges that sit inside some near-complete copy. */
  involved: Set<string>;
  /** The missing edges that would finish those copies. */
  completions: Edge[];
  count: number;
};

/** Which claimed edges to highlight for a seat, straight from the
 * payload's threat records. */
export function threatOverlay(state: StatePayload, seat: Seat): ThreatOverlay {
  const records: ThreatJson[] = state.threats[seat];
  const involved = new Set<string>();
  const completions: Edge[] = [];
  for (const rec of records) {
    for (const e of rec.edges) involved.add(edgeKey(e));
    completions.push(rec.completing);
  }
  return { involved, completions, count: records.length };
}

/** A 2-edge drawn on the x-board. */
export type SceneLine = {
  pair: Pair;
  seat: Seat;
  /** Part of a near-complete copy of the drawing seat. */
  hot: boolean;
};

export type SceneCaption = { seat: Seat; text: string };

export type XBoardScene = {
  x: number;
  /** Non-center vertices, ascending; the nodes to lay out. */
  vertices: number[];
  lines: SceneLine[];
  /** Claimed edges that avoid the center, rendered "+a b c". */
  captions: SceneCaption[];
};

/** Project the state onto the selected center's x-board. All lines come
 * from the payload's xboard projection; captions list claimed edges the
 * projection cannot show. Returns null when the payload has no x-board. */
export function xboardScene(state: StatePayload): XBoardScene | null {
  const xb = state.xboard;
  if (!xb) return null;

  const hot: Record<Seat, Set<string>> = {
    p1: hotPairs(state.threats.p1, xb.x),
    p2: hotPairs(state.threats.p2, xb.x),
  };

  const vertices = new Set<number>();
  const lines: SceneLine[] = [];
  for (const seat of ["p1", "p2"] as const) {
    for (const pair of xb[seat]) {
      for (const v of pair) vertices.add(v);
      lines.push({ pair, seat, hot: hot[seat].has(pair.join(" ")) });
    }
  }

  const captions: SceneCaption[] = [];
  for (const seat of ["p1", "p2"] as const) {
    const edges = seat === "p1" ? state.p1_edges : state.p2_edges;
    for (const e of edges) {
      if (!e.includes(xb.x)) captions.push({ seat, text: `+${e.join(" ")}` });
    }
  }

  return { x: xb.x, vertices: [...vertices].sort((a, b) => a - b), lines, captions };
}

/** Pairs through x that belong to some near-complete copy. */
function hotPairs(records: ThreatJson[], x: number): Set<string> {
  const out = new Set<string>();
  for (const rec of records) {
    for (const e of rec.edges) {
      if (e.includes(x)) out.add(e.filter((v) => v !== x).join(" "));
    }
  }
  return out;
}

export type Point = { x: number; y: number };

/** Evenly spaced circle layout for the scene's vertices. */
export function layoutCircle(ids: number[], radius: number, cx: number, cy: number): Map<number, Point> {
  const pos = new Map<number, Point>();
  const n = Math.max(ids.length, 1);
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    pos.set(id, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  return pos;
}
