import type { StatePayload } from "./protocol";
import type { XBoardScene } from "./view";
import { SEAT_COLOR, layoutCircle, progress, xboardScene } from "./view";

const W = 420;
const H = 420;
const R = 160;

/** Render the x-board as a standalone SVG string (no DOM needed). */
export function renderXBoard(scene: XBoardScene): string {
  const pos = layoutCircle(scene.vertices, R, W / 2, H / 2);
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" class="xboard">`,
    `<text x="${W / 2}" y="20" text-anchor="middle" class="board-title">board of ${scene.x}</text>`,
  ];

  for (const line of scene.lines) {
    const [a, b] = line.pair;
    if (a === undefined || b === undefined) continue;
    const pa = pos.get(a);
    const pb = pos.get(b);
    if (!pa || !pb) continue;
    const color = SEAT_COLOR[line.seat];
    const width = line.hot ? 4.5 : 2;
    const flag = line.hot ? ` data-hot="1"` : "";
    parts.push(
      `<line x1="${fmt(pa.x)}" y1="${fmt(pa.y)}" x2="${fmt(pb.x)}" y2="${fmt(pb.y)}" ` +
        `stroke="${color}" stroke-width="${width}" data-seat="${line.seat}"${flag}/>`,
    );
  }

  for (const v of scene.vertices) {
    const p = pos.get(v);
    if (!p) continue;
    parts.push(
      `<circle cx="${fmt(p.x)}" cy="${fmt(p.y)}" r="11" class="vertex" data-v="${v}"/>`,
      `<text x="${fmt(p.x)}" y="${fmt(p.y + 4)}" text-anchor="middle" class="vertex-label">${v}</text>`,
    );
  }

  scene.captions.forEach((cap, i) => {
    parts.push(
      `<text x="10" y="${H - 12 - 16 * (scene.captions.length - 1 - i)}" ` +
        `fill="${SEAT_COLOR[cap.seat]}" class="caption">${cap.text}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("");
}

/** Both progress bars as a small HTML fragment. */
export function renderProgress(state: StatePayload): string {
  const rows = (["p1", "p2"] as const).map((seat) => {
    const p = progress(state, seat);
    const pct = (100 * p.frac).toFixed(1);
    return (
      `<div class="progress-row" data-seat="${seat}">` +
      `<span class="progress-name">${seat === "p1" ? "you" : "engine"}</span>` +
      `<div class="progress-track"><div class="progress-fill" ` +
      `style="width:${pct}%;background:${SEAT_COLOR[seat]}"></div></div>` +
      `<span class="progress-text">${p.value}/${p.total}</span>` +
      `</div>`
    );
  });
  return rows.join("");
}

/** Render the state's x-board if present, else a hintful placeholder. */
export function renderBoardOrNote(state: StatePayload): string {
  const scene = xboardScene(state);
  if (!scene) return `<p class="note">pick a center vertex to see its board</p>`;
  return renderXBoard(scene);
}

function fmt(n: number): string {
  return n.toFixed(1);
}
