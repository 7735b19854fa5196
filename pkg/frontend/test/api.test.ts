import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiError, detect, health, ingest, setApiBase } from "../src/api";

function fakeResponse(status: number, body: unknown) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  };
}

afterEach(() => {
  vi.unstubAllGlobals();
  setApiBase("..");
});

describe("detect", () => {
  it("posts the query and returns the parsed report", async () => {
    const payload = { query_text: "q", candidates: [], timings: {} };
    const fetchMock = vi.fn().mockResolvedValue(fakeResponse(200, payload));
    vi.stubGlobal("fetch", fetchMock);

    const report = await detect("suspect text", 5, null);
    expect(report).toEqual(payload);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("../detect");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body)).toEqual({ text: "suspect text", k: 5 });
  });

  it("includes nprobe only when set", async () => {
    const fetchMock = vi.fn().mockResolvedValue(fakeResponse(200, {}));
    vi.stubGlobal("fetch", fetchMock);
    await detect("t", 3, 8);
    expect(JSON.parse(fetchMock.mock.calls[0][1].body)).toEqual({
      text: "t",
      k: 3,
      nprobe: 8,
    });
  });

  it("passes the abort signal through to fetch", async () => {
    const fetchMock = vi.fn().mockResolvedValue(fakeResponse(200, {}));
    vi.stubGlobal("fetch", fetchMock);
    const controller = new AbortController();
    await detect("t", 3, null, controller.signal);
    expect(fetchMock.mock.calls[0][1].signal).toBe(controller.signal);
  });

  it("rethrows an abort untouched", async () => {
    const abort = new DOMException("The operation was aborted.", "AbortError");
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(abort));
    await expect(detect("t", 3, null)).rejects.toBe(abort);
  });
});

describe("error handling", () => {
  it("surfaces the server's error message and status", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(fakeResponse(400, { error: "query text is empty" })),
    );
    const err = await detect("", 3, null).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.message).toBe("query text is empty");
    expect(err.status).toBe(400);
    expect(err.emptyIndex).toBe(false);
  });

  it("marks a 409 as the empty index case", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(fakeResponse(409, { error: "no segments indexed" })),
    );
    const err = await detect("t", 3, null).catch((e) => e);
    expect(err.emptyIndex).toBe(true);
  });

  it("falls back to a generic message for bodies without error text", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue({
        ok: false,
        status: 500,
        json: async () => {
          throw new Error("not json");
        },
      }),
    );
    const err = await health().catch((e) => e);
    expect(err.message).toBe("request failed (500)");
  });

  it("reports an unreachable engine as status 0", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new TypeError("fetch failed")));
    const err = await health().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
    expect(err.message).toMatch(/unreachable/);
  });
});

describe("ingest", () => {
  it("wraps the segments and returns the count", async () => {
    const fetchMock = vi.fn().mockResolvedValue(fakeResponse(200, { count: 2 }));
    vi.stubGlobal("fetch", fetchMock);
    const segments = [
      { id: 0, doc_id: "d", text: "a" },
      { id: 1, doc_id: "d", text: "b" },
    ];
    const res = await ingest(segments);
    expect(res.count).toBe(2);
    expect(JSON.parse(fetchMock.mock.calls[0][1].body)).toEqual({ corpus: segments });
  });
});

describe("setApiBase", () => {
  it("prefixes requests with the configured base", async () => {
    const fetchMock = vi.fn().mockResolvedValue(fakeResponse(200, { status: "ok" }));
    vi.stubGlobal("fetch", fetchMock);
    setApiBase("http://127.0.0.1:8000");
    await health();
    expect(fetchMock.mock.calls[0][0]).toBe("http://127.0.0.1:8000/health");
  });
});
