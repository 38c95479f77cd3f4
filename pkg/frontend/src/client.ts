/** Thin typed client for the gourds HTTP service. */

import type {
  HintReply,
  Move,
  PlanJson,
  SessionState,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function unwrap<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      detail = ((await res.json()) as { detail: string }).detail;
    } catch {
      // keep the status text
    }
    throw new ServiceError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class Client {
  constructor(private base: string) {}

  createSession(body: {
    board: string;
    config: string;
    target?: string;
    mode?: string;
  }): Promise<SessionState> {
    return this.post("/session", body);
  }

  getState(sid: string): Promise<SessionState> {
    return this.get(`/session/${sid}`);
  }

  async legalMoves(sid: string): Promise<Move[]> {
    const r = await this.get<{ moves: Move[] }>(`/session/${sid}/moves`);
    return r.moves;
  }

  move(sid: string, move: Move): Promise<SessionState> {
    return this.post(`/session/${sid}/move`, move);
  }

  hint(sid: string): Promise<HintReply> {
    return this.post(`/session/${sid}/hint`, {});
  }

  solve(sid: string, strategy = "quadratic"): Promise<PlanJson> {
    return this.post(`/session/${sid}/solve?strategy=${strategy}`, {});
  }

  scramble(sid: string, steps: number, seed: number): Promise<SessionState> {
    return this.post(`/session/${sid}/scramble`, { steps, seed });
  }

  private async get<T>(path: string): Promise<T> {
    return unwrap<T>(await fetch(this.base + path));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    return unwrap<T>(
      await fetch(this.base + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }
}
