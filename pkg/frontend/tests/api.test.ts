import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface RecordedCall {
  url: string;
  method: string | undefined;
  body: unknown;
}

function stubFetch(responder: (call: RecordedCall) => Response) {
  const calls: RecordedCall[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const call: RecordedCall = {
      url: input,
      method: init?.method,
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    };
    calls.push(call);
    return responder(call);
  };
  return { calls, fetchFn };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const state = {
  stage: 0,
  to_move: "I",
  over: false,
  horizon: 8,
  interval: { lower: null, upper: null, lower_text: null, upper_text: null },
  phase: { kind: "sigma", next_piece: 0 },
  moves: 0,
};

describe("request shapes", () => {
  it("creates sessions with the exact body the service expects", async () => {
    const { calls, fetchFn } = stubFetch(() => jsonResponse({ id: "abc123", state }));
    const client = new ApiClient("http://svc", fetchFn);
    const created = await client.createSession({
      order: "Q",
      strategy: "sigma(enumerated(e,8))",
      horizon: 8,
    });
    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe("http://svc/sessions");
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.body).toEqual({
      order: "Q",
      strategy: "sigma(enumerated(e,8))",
      horizon: 8,
    });
    expect(created.id).toBe("abc123");
    expect(created.state.stage).toBe(0);
  });

  it("posts moves and previews to the session's endpoints", async () => {
    const { calls, fetchFn } = stubFetch(() =>
      jsonResponse({ legal: true, reply_text: "1", certificates: [], state }),
    );
    const client = new ApiClient("http://svc", fetchFn);
    await client.move("abc123", "0");
    await client.preview("abc123", "1/2");
    expect(calls[0]!.url).toBe("http://svc/sessions/abc123/move");
    expect(calls[0]!.body).toEqual({ point: "0" });
    expect(calls[1]!.url).toBe("http://svc/sessions/abc123/preview");
    expect(calls[1]!.body).toEqual({ point: "1/2" });
  });

  it("returns the transcript body verbatim, not a re-serialization", async () => {
    const literal = '{\n  "order": "Q",\n  "seed": 0\n}\n';
    const { calls, fetchFn } = stubFetch(() => new Response(literal, { status: 200 }));
    const client = new ApiClient("http://svc", fetchFn);
    const text = await client.transcriptText("abc123");
    expect(text).toBe(literal);
    expect(calls[0]!.url).toBe("http://svc/sessions/abc123");
    expect(calls[0]!.method).toBe("GET");
  });
});

describe("error mapping", () => {
  it("surfaces the service's error field with the HTTP status", async () => {
    const { fetchFn } = stubFetch(() => jsonResponse({ error: "unknown order" }, 400));
    const client = new ApiClient("http://svc", fetchFn);
    const err = await client
      .createSession({ order: "nope", strategy: "universal", horizon: 8 })
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(400);
    expect((err as ApiError).message).toBe("unknown order");
  });

  it("keeps the status when the error body is not JSON", async () => {
    const { fetchFn } = stubFetch(() => new Response("boom", { status: 500 }));
    const client = new ApiClient("http://svc", fetchFn);
    const err = await client.move("abc", "0").then(() => null, (e: unknown) => e);
    expect((err as ApiError).status).toBe(500);
  });

  it("maps a dead socket to status 0 for the unreachable banner", async () => {
    const client = new ApiClient("http://svc", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await client
      .createSession({ order: "Q", strategy: "universal", horizon: 8 })
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(0);
    expect((err as ApiError).message).toContain("unreachable");
  });

  it("reports a finished game's 409 as its own status", async () => {
    const { fetchFn } = stubFetch(() => jsonResponse({ error: "game over" }, 409));
    const client = new ApiClient("http://svc", fetchFn);
    const err = await client.move("abc", "0").then(() => null, (e: unknown) => e);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).message).toBe("game over");
  });
});
