/**
 * Typed transport for the session service.
 *
 * Nothing in this module decides anything about the game. It carries the
 * user's text to the service and hands the service's answers back verbatim;
 * every legality verdict, reply, certificate, and interval shown anywhere in
 * the playground originates in one of these response objects.
 */

export interface IntervalWire {
  lower: unknown;
  upper: unknown;
  lower_text: string | null;
  upper_text: string | null;
}

export interface SigmaPhase {
  kind: "sigma";
  next_piece: number;
}

export interface BlocksSearchingPhase {
  kind: "blocks";
  phase: "searching" | "won";
  bound: string;
}

export interface BlocksDelegatingPhase {
  kind: "blocks";
  phase: "delegating";
  block: string;
  inner: PhaseWire;
}

export type PhaseWire = SigmaPhase | BlocksSearchingPhase | BlocksDelegatingPhase;

export interface StateWire {
  stage: number;
  to_move: "I" | "II";
  over: boolean;
  horizon: number;
  interval: IntervalWire;
  phase: PhaseWire;
  moves: number;
}

export interface ViolationWire {
  side: "lower" | "upper";
  bound: unknown;
  bound_text: string;
}

export interface CertificateWire {
  stage: number;
  kind: string;
  data: Record<string, unknown>;
  text: string;
}

export interface MoveResultWire {
  legal: boolean;
  reply?: unknown;
  reply_text?: string;
  certificates?: CertificateWire[];
  violated?: ViolationWire[];
  message?: string;
  state: StateWire;
}

export interface CreateResultWire {
  id: string;
  state: StateWire;
}

export interface CreateRequest {
  order: string;
  strategy: string;
  horizon: number;
  payoff?: string;
}

/** status 0 means the service could not be reached at all. */
export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.base + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      let message = `${resp.status}`;
      try {
        const parsed = (await resp.json()) as { error?: unknown };
        if (typeof parsed.error === "string") message = parsed.error;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, message);
    }
    return resp;
  }

  async createSession(req: CreateRequest): Promise<CreateResultWire> {
    const resp = await this.request("POST", "/sessions", req);
    return (await resp.json()) as CreateResultWire;
  }

  async move(id: string, pointText: string): Promise<MoveResultWire> {
    const resp = await this.request("POST", `/sessions/${id}/move`, { point: pointText });
    return (await resp.json()) as MoveResultWire;
  }

  async preview(id: string, pointText: string): Promise<MoveResultWire> {
    const resp = await this.request("POST", `/sessions/${id}/preview`, { point: pointText });
    return (await resp.json()) as MoveResultWire;
  }

  /**
   * The canonical transcript JSON, byte for byte as the service sent it.
   * The download feature saves exactly this string, never a re-serialization.
   */
  async transcriptText(id: string): Promise<string> {
    const resp = await this.request("GET", `/sessions/${id}`);
    return resp.text();
  }

  async deleteSession(id: string): Promise<void> {
    await this.request("DELETE", `/sessions/${id}`);
  }
}
