import { afterEach, describe, expect, it, vi } from "vitest";

import { ClassifyClient, StaleResponseError } from "../src/api";

const payload = [
  [
    { x: 0, y: 0, t: 0 },
    { x: 1, y: 1, t: 10 },
  ],
];

function jsonResponse(body: unknown, delayMs: number): Promise<Response> {
  return new Promise((resolve) =>
    setTimeout(
      () =>
        resolve(
          new Response(JSON.stringify(body), {
            status: 200,
            headers: { "content-type": "application/json" },
          }),
        ),
      delayMs,
    ),
  );
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ClassifyClient", () => {
  it("discards responses superseded by a newer request", async () => {
    const bodies = [
      { candidates: [{ symbol: "old", score: 1 }], latency_ms: 1 },
      { candidates: [{ symbol: "new", score: 2 }], latency_ms: 1 },
    ];
    let call = 0;
    vi.stubGlobal(
      "fetch",
      vi.fn(() => jsonResponse(bodies[call++], call === 1 ? 80 : 5)),
    );
    const client = new ClassifyClient(() => "http://svc");
    const first = client.classify(payload, 5, "asym");
    const second = client.classify(payload, 5, "asym");
    await expect(second).resolves.toMatchObject({
      candidates: [{ symbol: "new", score: 2 }],
    });
    await expect(first).rejects.toSatisfy(
      (e) => e instanceof StaleResponseError || (e as Error).name === "AbortError",
    );
  });

  it("surfaces the service's error message", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response(JSON.stringify({ error: "degenerate stroke" }), { status: 400 })),
    );
    const client = new ClassifyClient(() => "http://svc");
    await expect(client.classify(payload, 5, "asym")).rejects.toThrow(
      "degenerate stroke",
    );
  });

  it("passes k and mode as query parameters", async () => {
    const seen: string[] = [];
    vi.stubGlobal(
      "fetch",
      vi.fn(async (url: RequestInfo | URL) => {
        seen.push(String(url));
        return new Response(JSON.stringify({ candidates: [], latency_ms: 0 }), {
          status: 200,
        });
      }),
    );
    const client = new ClassifyClient(() => "http://svc/");
    await client.classify(payload, 7, "sym");
    expect(seen[0]).toBe("http://svc/classify?k=7&mode=sym");
  });
});
