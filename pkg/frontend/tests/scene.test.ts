import { describe, expect, it } from "vitest";

import { sortedTriple } from "../src/client";
import type { StatePayload } from "../src/protocol";
import { renderProgress, renderXBoard } from "../src/render";
import { canonJson } from "../src/transport";
import {
  SEAT_COLOR,
  layoutCircle,
  progress,
  threatOverlay,
  xboardScene,
} from "../src/view";

function statePayload(over: Partial<StatePayload> = {}): StatePayload {
  return {
    v: 1,
    type: "state",
    target: "hatK24-3",
    k: 3,
    to_move: 1,
    status: { kind: "ongoing" },
    pool_size: 8,
    horizon: null,
    p1_edges: [],
    p2_edges: [],
    move_log: [],
    threats: { p1: [], p2: [] },
    measures: { p1: 0, p2: 0 },
    edge_total: 9,
    ...over,
  };
}

describe("move entry", () => {
  it("clicking a pair with a selected center sends the sorted triple", () => {
    expect(sortedTriple(6, 9, 2)).toEqual([2, 6, 9]);
    expect(sortedTriple(0, 1, 2)).toEqual([0, 1, 2]);
  });
});

describe("progress", () => {
  it("is the served measure over the copy size", () => {
    const st = statePayload({ measures: { p1: 4, p2: 7 } });
    expect(progress(st, "p1")).toEqual({ value: 4, total: 9, frac: 4 / 9 });
    expect(progress(st, "p2").frac).toBeCloseTo(7 / 9, 12);
  });
});

describe("threat overlay", () => {
  it("collects involved edges and completions per seat", () => {
    const st = statePayload({
      threats: {
        p1: [],
        p2: [
          {
            edges: [
              [3, 4, 5],
              [3, 4, 6],
            ],
            completing: [3, 4, 7],
            uses_fresh: false,
          },
        ],
      },
    });
    const overlay = threatOverlay(st, "p2");
    expect(overlay.count).toBe(1);
    expect(overlay.involved.has("3 4 5")).toBe(true);
    expect(overlay.involved.has("3 4 7")).toBe(false);
    expect(overlay.completions).toEqual([[3, 4, 7]]);
    expect(threatOverlay(st, "p1").count).toBe(0);
  });
});

describe("x-board scene", () => {
  const st = statePayload({
    p1_edges: [
      [0, 1, 2],
      [20, 21, 22],
    ],
    p2_edges: [[0, 3, 4]],
    threats: {
      p1: [],
      p2: [
        {
          edges: [[0, 3, 4]],
          completing: [0, 3, 5],
          uses_fresh: false,
        },
      ],
    },
    xboard: { x: 0, p1: [[1, 2]], p2: [[3, 4]] },
  });

  it("draws exactly the served projection", () => {
    const scene = xboardScene(st)!;
    expect(scene.x).toBe(0);
    expect(scene.vertices).toEqual([1, 2, 3, 4]);
    expect(scene.lines).toContainEqual({ pair: [1, 2], seat: "p1", hot: false });
    expect(scene.lines).toContainEqual({ pair: [3, 4], seat: "p2", hot: true });
  });

  it("captions claimed edges that avoid the center", () => {
    const scene = xboardScene(st)!;
    expect(scene.captions).toEqual([{ seat: "p1", text: "+20 21 22" }]);
  });

  it("is absent without a projection in the payload", () => {
    expect(xboardScene(statePayload())).toBeNull();
  });
});

describe("svg output", () => {
  it("colors the seats violet and blue and flags hot lines", () => {
    const st = statePayload({
      p1_edges: [[0, 1, 2]],
      p2_edges: [[0, 3, 4]],
      threats: {
        p1: [],
        p2: [{ edges: [[0, 3, 4]], completing: [0, 3, 5], uses_fresh: false }],
      },
      xboard: { x: 0, p1: [[1, 2]], p2: [[3, 4]] },
    });
    const svg = renderXBoard(xboardScene(st)!);
    expect(svg).toContain(`stroke="${SEAT_COLOR.p1}"`);
    expect(svg).toContain(`stroke="${SEAT_COLOR.p2}"`);
    expect(svg).toContain(`data-hot="1"`);
    expect(svg).toContain(`data-v="4"`);
    expect(svg).toContain("board of 0");
  });

  it("progress bars carry the exact counts", () => {
    const html = renderProgress(statePayload({ measures: { p1: 3, p2: 8 } }));
    expect(html).toContain(">3/9<");
    expect(html).toContain(">8/9<");
    expect(html).toContain(SEAT_COLOR.p2);
  });
});

describe("layout", () => {
  it("places every vertex on the circle at distinct angles", () => {
    const pos = layoutCircle([1, 5, 9, 12], 100, 0, 0);
    expect(pos.size).toBe(4);
    for (const p of pos.values()) {
      expect(Math.hypot(p.x, p.y)).toBeCloseTo(100, 9);
    }
    const keys = [...pos.values()].map((p) => `${p.x.toFixed(3)},${p.y.toFixed(3)}`);
    expect(new Set(keys).size).toBe(4);
  });
});

describe("canonical request text", () => {
  it("ignores key order and preserves arrays", () => {
    expect(canonJson({ b: 1, a: [2, { d: 3, c: 4 }] })).toBe(
      canonJson({ a: [2, { c: 4, d: 3 }], b: 1 }),
    );
    expect(canonJson([1, 2])).not.toBe(canonJson([2, 1]));
    expect(canonJson(null)).toBe("null");
  });
});
