import type { Request, Response } from "./protocol";

/** Anything that can carry one request to the server and bring back the
 * reply. The engine is reached through `strongdraw serve` (stdio) or
 * `strongdraw serve --port N` behind a one-liner WebSocket bridge. */
export interface Transport {
  send(req: Request): Promise<Response>;
}

/** WebSocket transport: requests are serialized strictly in order, since
 * the server answers one line per line. */
export class WsTransport implements Transport {
  private sock: WebSocket;
  private ready: Promise<void>;
  private queue: Array<(line: string) => void> = [];

  constructor(url: string) {
    this.sock = new WebSocket(url);
    this.ready = new Promise((resolve, reject) => {
      this.sock.onopen = () => resolve();
      this.sock.onerror = () => reject(new Error(`cannot reach ${url}`));
    });
    this.sock.onmessage = (ev) => {
      const waiter = this.queue.shift();
      if (waiter) waiter(String(ev.data));
    };
  }

  async send(req: Request): Promise<Response> {
    await this.ready;
    return new Promise((resolve) => {
      this.queue.push((line) => resolve(JSON.parse(line) as Response));
      this.sock.send(JSON.stringify(req));
    });
  }

  close(): void {
    this.sock.close();
  }
}

/** One request/response exchange of a recorded session. */
export type RecordedExchange = { req: Request; resp: Response };

/** Replays a recorded session: each send must match the next recorded
 * request exactly, and gets the recorded reply. Keeps the UI test suite
 * honest — every displayed fact originates from a real server response —
 * without needing the engine installed. */
export class ReplayTransport implements Transport {
  private cursor = 0;

  constructor(private readonly tape: RecordedExchange[]) {}

  get exhausted(): boolean {
    return this.cursor >= this.tape.length;
  }

  /** Recorded requests not yet consumed (for driving a replay). */
  peek(): RecordedExchange | undefined {
    return this.tape[this.cursor];
  }

  send(req: Request): Promise<Response> {
    const next = this.tape[this.cursor];
    if (!next) {
      return Promise.reject(
        new Error(`replay tape exhausted at request ${JSON.stringify(req)}`),
      );
    }
    const got = canonJson(req);
    const want = canonJson(next.req);
    if (got !== want) {
      return Promise.reject(
        new Error(`replay divergence at #${this.cursor}: sent ${got}, recorded ${want}`),
      );
    }
    this.cursor += 1;
    return Promise.resolve(next.resp);
  }
}

/** JSON text with object keys sorted, so key order never causes a bogus
 * replay divergence. */
export function canonJson(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonJson).join(",")}]`;
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonJson(v)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

/** Parse a JSONL session recording (one {req, resp} object per line). */
export function parseRecording(text: string): RecordedExchange[] {
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as RecordedExchange);
}
