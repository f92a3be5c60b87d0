import { GameClient } from "./client";
import type { StatePayload } from "./protocol";
import { WsTransport } from "./transport";
import { renderBoardOrNote, renderProgress } from "./render";
import { SEAT_COLOR, threatOverlay } from "./view";

/** Browser bootstrap: everything on screen is re-derived from the last
 * state payload whenever the client reports one. */
export function mount(root: HTMLElement, url = "ws://localhost:8765"): GameClient {
  const client = new GameClient(new WsTransport(url));

  root.innerHTML = `
    <div class="toolbar">
      <input id="target" value="hatK24-3" title="target name"/>
      <button id="new">new game</button>
      <input id="center" type="number" placeholder="center" style="width:5em"/>
      <input id="raw" placeholder="raw move: a b c" style="width:9em"/>
      <button id="send">move</button>
      <button id="hint">hint</button>
      <button id="resign">resign</button>
    </div>
    <div id="status" class="status"></div>
    <div id="progress"></div>
    <div id="board"></div>
    <div id="threats"></div>
    <ol id="history"></ol>
  `;

  const el = <T extends HTMLElement>(id: string): T =>
    root.querySelector(`#${id}`) as T;

  let pendingVertex: number | null = null;

  function redraw(state: StatePayload): void {
    const status = state.status.resigned
      ? "resigned — engine wins"
      : state.status.kind;
    el("status").textContent =
      `${state.target} · ${status} · move ${state.move_log.length}` +
      (state.to_move === 1 && state.status.kind === "ongoing" ? " · your turn" : "");
    el("progress").innerHTML = renderProgress(state);
    el("board").innerHTML = renderBoardOrNote(state);

    const yours = threatOverlay(state, "p1");
    const theirs = threatOverlay(state, "p2");
    el("threats").innerHTML =
      `<span style="color:${SEAT_COLOR.p1}">your threats: ${yours.count}</span> · ` +
      `<span style="color:${SEAT_COLOR.p2}">engine threats: ${theirs.count}</span>`;

    const hist = el<HTMLOListElement>("history");
    hist.innerHTML = "";
    for (const [player, edge] of state.move_log) {
      const li = document.createElement("li");
      li.textContent = `${player === 1 ? "you" : "engine"}: ${edge.join(" ")}`;
      li.style.color = SEAT_COLOR[player === 1 ? "p1" : "p2"];
      hist.appendChild(li);
    }

    for (const node of root.querySelectorAll<SVGCircleElement>(".vertex")) {
      node.addEventListener("click", () => {
        const v = Number(node.dataset.v);
        if (pendingVertex === null) {
          pendingVertex = v;
          node.classList.add("picked");
        } else if (pendingVertex !== v) {
          const y = pendingVertex;
          pendingVertex = null;
          void client.movePair(y, v);
        }
      });
    }
  }

  client.onEvent((ev) => {
    if (ev.kind === "state") redraw(ev.state);
    if (ev.kind === "error") el("status").textContent = `error: ${ev.error.code} — ${ev.error.message}`;
    if (ev.kind === "hint") el<HTMLInputElement>("raw").value = ev.e.join(" ");
  });

  el("new").onclick = () => void client.newGame(el<HTMLInputElement>("target").value.trim());
  el("send").onclick = () => {
    const parts = el<HTMLInputElement>("raw").value.trim().split(/\s+/).map(Number);
    if (parts.length && parts.every((n) => Number.isInteger(n) && n >= 0)) {
      void client.move(parts);
    }
  };
  el("hint").onclick = () => void client.hint();
  el("resign").onclick = () => void client.resign();
  el("center").onchange = () => {
    const raw = el<HTMLInputElement>("center").value;
    void client.selectCenter(raw === "" ? null : Number(raw));
  };

  return client;
}
