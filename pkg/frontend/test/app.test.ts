import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { mountApp } from "../src/main";
import report from "./fixtures/detect.json";

const flush = () => new Promise((resolve) => setTimeout(resolve, 0));

function okResponse(body: unknown) {
  return { ok: true, status: 200, json: async () => body };
}

function errResponse(status: number, message: string) {
  return { ok: false, status, json: async () => ({ error: message }) };
}

let root: HTMLElement;

function mount(): void {
  root = document.createElement("div");
  document.body.appendChild(root);
  mountApp(root);
}

function submitQuery(text: string): void {
  root.querySelector<HTMLTextAreaElement>("#query")!.value = text;
  root
    .querySelector<HTMLFormElement>("#detect-form")!
    .dispatchEvent(new Event("submit", { cancelable: true }));
}

function pickFile(content: string): void {
  const input = root.querySelector<HTMLInputElement>("#corpus-file")!;
  // jsdom file inputs are read only, hand the handler a stub instead
  const fake = { text: async () => content } as unknown as File;
  Object.defineProperty(input, "files", { value: [fake], configurable: true });
  input.dispatchEvent(new Event("change"));
}

beforeEach(() => {
  history.replaceState(null, "", "/");
});

afterEach(() => {
  root.remove();
  vi.unstubAllGlobals();
});

describe("detection flow", () => {
  it("renders the response table and records the query in the URL", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(okResponse(report)));
    mount();
    submitQuery("a suspect passage");
    await flush();

    expect(root.querySelectorAll("tr.candidate").length).toBe(
      report.candidates.length,
    );
    expect(root.querySelector<HTMLButtonElement>("#download")!.disabled).toBe(false);
    const params = new URLSearchParams(location.search);
    expect(params.get("q")).toBe("a suspect passage");
    expect(params.get("k")).toBe("10");
  });

  it("shows upload guidance when nothing is indexed yet", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(errResponse(409, "no segments indexed")),
    );
    mount();
    submitQuery("anything");
    await flush();

    expect(root.querySelector("#results")!.textContent).toContain(
      "No segments are indexed yet",
    );
    expect(root.querySelector<HTMLElement>("#banner")!.hidden).toBe(true);
    expect(root.querySelector<HTMLButtonElement>("#run")!.disabled).toBe(false);
  });

  it("keeps the controls usable when the engine is unreachable", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new TypeError("refused")));
    mount();
    submitQuery("anything");
    await flush();

    const banner = root.querySelector<HTMLElement>("#banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toMatch(/unreachable/);
    expect(root.querySelector<HTMLButtonElement>("#run")!.disabled).toBe(false);
    expect(root.querySelector<HTMLTextAreaElement>("#query")!.disabled).toBe(false);
  });

  it("aborts the previous request when a new one is submitted", async () => {
    const signals: AbortSignal[] = [];
    const fetchMock = vi.fn((_url: string, init: RequestInit) => {
      signals.push(init.signal as AbortSignal);
      if (signals.length === 1) return new Promise(() => {});
      return Promise.resolve(okResponse(report));
    });
    vi.stubGlobal("fetch", fetchMock);
    mount();
    submitQuery("first");
    submitQuery("second");
    await flush();

    expect(signals.length).toBe(2);
    expect(signals[0].aborted).toBe(true);
    expect(signals[1].aborted).toBe(false);
    expect(root.querySelectorAll("tr.candidate").length).toBe(
      report.candidates.length,
    );
  });

  it("re-queries when the candidate slider changes", async () => {
    const fetchMock = vi.fn().mockResolvedValue(okResponse(report));
    vi.stubGlobal("fetch", fetchMock);
    mount();
    submitQuery("text");
    await flush();

    const k = root.querySelector<HTMLInputElement>("#k")!;
    k.value = "3";
    k.dispatchEvent(new Event("change"));
    await flush();

    expect(fetchMock).toHaveBeenCalledTimes(2);
    expect(JSON.parse(fetchMock.mock.calls[1][1].body).k).toBe(3);
    expect(root.querySelector("#k-value")!.textContent).toBe("3");
  });

  it("expands a clicked row into the side by side view", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(okResponse(report)));
    mount();
    submitQuery("a suspect passage");
    await flush();

    const row = root.querySelector<HTMLElement>("tr.candidate")!;
    row.querySelector(".text")!.dispatchEvent(new Event("click", { bubbles: true }));
    const detail = root.querySelector<HTMLElement>("#detail")!;
    expect(detail.hidden).toBe(false);
    expect(detail.textContent).toContain(report.candidates[0].text);
    expect(detail.textContent).toContain(report.query_text);

    row.dispatchEvent(new Event("click", { bubbles: true }));
    expect(detail.hidden).toBe(true);
  });

  it("replays the query stored in the URL on mount", async () => {
    history.replaceState(null, "", "/?q=hello+world&k=5");
    const fetchMock = vi.fn().mockResolvedValue(okResponse(report));
    vi.stubGlobal("fetch", fetchMock);
    mount();
    await flush();

    expect(fetchMock).toHaveBeenCalledTimes(1);
    const body = JSON.parse(fetchMock.mock.calls[0][1].body);
    expect(body.text).toBe("hello world");
    expect(body.k).toBe(5);
    expect(root.querySelector<HTMLTextAreaElement>("#query")!.value).toBe(
      "hello world",
    );
  });
});

describe("corpus upload", () => {
  it("reports the indexed count in a toast", async () => {
    const fetchMock = vi.fn().mockResolvedValue(okResponse({ count: 3 }));
    vi.stubGlobal("fetch", fetchMock);
    mount();
    pickFile(
      [
        '{"id": 0, "doc_id": "d", "text": "one"}',
        '{"id": 1, "doc_id": "d", "text": "two"}',
        '{"id": 2, "doc_id": "d", "text": "three"}',
      ].join("\n"),
    );
    await flush();

    expect(fetchMock.mock.calls[0][0]).toBe("../ingest");
    expect(root.querySelector("#toast")!.textContent).toBe("3 segments indexed");
    expect(root.querySelector<HTMLElement>("#upload-error")!.hidden).toBe(true);
  });

  it("shows the failing line inline without calling the engine", async () => {
    const fetchMock = vi.fn();
    vi.stubGlobal("fetch", fetchMock);
    mount();
    pickFile(
      [
        '{"id": 0, "doc_id": "d", "text": "one"}',
        '{"id": 1, "doc_id": "d", "text": "two"}',
        "oops",
      ].join("\n"),
    );
    await flush();

    expect(fetchMock).not.toHaveBeenCalled();
    const inline = root.querySelector<HTMLElement>("#upload-error")!;
    expect(inline.hidden).toBe(false);
    expect(inline.textContent).toContain("line 3");
  });

  it("surfaces a server side ingest rejection inline", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(errResponse(400, "segment text is empty")),
    );
    mount();
    pickFile('{"id": 0, "doc_id": "d", "text": "one"}');
    await flush();

    const inline = root.querySelector<HTMLElement>("#upload-error")!;
    expect(inline.hidden).toBe(false);
    expect(inline.textContent).toBe("segment text is empty");
  });
});
