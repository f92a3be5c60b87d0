import type {
  Edge,
  ErrorPayload,
  Request,
  Response,
  StatePayload,
} from "./protocol";
import { isError, isState } from "./protocol";
import type { Transport } from "./transport";

export type ClientEvent =
  | { kind: "state"; state: StatePayload }
  | { kind: "error"; error: ErrorPayload }
  | { kind: "hint"; e: Edge };

export type Listener = (ev: ClientEvent) => void;

/** Session client for the human first seat.
 *
 * `view` always holds the last `state` payload exactly as the server sent
 * it — the engine is authoritative, the client never evaluates rules. An
 * error reply leaves `view` untouched.
 */
export class GameClient {
  /** Verbatim mirror of the last state payload; null before new_game. */
  view: StatePayload | null = null;
  lastError: ErrorPayload | null = null;
  /** x-board center requested with every state-returning command. */
  center: number | null = null;

  private listeners: Listener[] = [];

  constructor(private readonly transport: Transport) {}

  onEvent(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(ev: ClientEvent): void {
    for (const fn of this.listeners) fn(ev);
  }

  private absorb(resp: Response): Response {
    if (isState(resp)) {
      this.view = resp;
      this.lastError = null;
      this.emit({ kind: "state", state: resp });
    } else if (isError(resp)) {
      this.lastError = resp;
      this.emit({ kind: "error", error: resp });
    } else {
      this.emit({ kind: "hint", e: resp.e });
    }
    return resp;
  }

  private async roundtrip(req: Request): Promise<Response> {
    return this.absorb(await this.transport.send(req));
  }

  async newGame(target: string, opts: { p2?: string; horizon?: number | null } = {}): Promise<Response> {
    const req: Extract<Request, { cmd: "new_game" }> = { cmd: "new_game", target };
    if (opts.p2 !== undefined) req.p2 = opts.p2;
    if (opts.horizon !== undefined) req.horizon = opts.horizon;
    if (this.center !== null) req.xboard = this.center;
    return this.roundtrip(req);
  }

  /** Submit the human move; the returned state already contains the
   * engine's reply when the game went on. */
  async move(e: Edge): Promise<Response> {
    const req: Extract<Request, { cmd: "move" }> = { cmd: "move", e };
    if (this.center !== null) req.xboard = this.center;
    return this.roundtrip(req);
  }

  /** Click helper: pair (y, z) on the current x-board means the 3-edge
   * through the center. Requires a selected center. */
  async movePair(y: number, z: number): Promise<Response> {
    if (this.center === null) throw new Error("no x-board center selected");
    return this.move(sortedTriple(this.center, y, z));
  }

  async hint(): Promise<Response> {
    return this.roundtrip({ cmd: "hint" });
  }

  async resign(): Promise<Response> {
    return this.roundtrip({ cmd: "resign" });
  }

  /** Re-fetch the authoritative state (reconnect path). */
  async snapshot(): Promise<Response> {
    const req: Extract<Request, { cmd: "snapshot" }> = { cmd: "snapshot" };
    if (this.center !== null) req.xboard = this.center;
    return this.roundtrip(req);
  }

  /** Select the x-board center and refresh the projection. */
  async selectCenter(x: number | null): Promise<Response> {
    this.center = x;
    return this.snapshot();
  }
}

export function sortedTriple(x: number, y: number, z: number): Edge {
  return [x, y, z].sort((a, b) => a - b);
}
