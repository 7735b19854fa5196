import { describe, expect, it } from "vitest";
import report from "./fixtures/detect.json";
import shuffled from "./fixtures/detect_shuffle.json";
import type { DetectionReport } from "../src/types";
import {
  clearDetail,
  escapeHtml,
  renderDetail,
  renderReport,
  showEmptyIndexGuidance,
  snippet,
} from "../src/view";

const fixture = report as DetectionReport;
const shuffleFixture = shuffled as DetectionReport;

function renderInto(data: DetectionReport): HTMLElement {
  const host = document.createElement("div");
  renderReport(host, data);
  return host;
}

describe("renderReport", () => {
  it("renders one row per candidate in response order", () => {
    const host = renderInto(fixture);
    const rows = host.querySelectorAll("tr.candidate");
    expect(rows.length).toBe(fixture.candidates.length);
    const ids = [...rows].map((r) => Number((r as HTMLElement).dataset.id));
    expect(ids).toEqual(fixture.candidates.map((c) => c.id));
  });

  it("table content matches the detection response field for field", () => {
    // rank, verdict label and the three probabilities shown to two
    // decimals must be exactly what the engine returned, row by row
    const host = renderInto(fixture);
    const rendered = [...host.querySelectorAll("tr.candidate")].map((row) => ({
      rank: Number(row.querySelector(".rank")!.textContent),
      label: row.querySelector(".badge")!.getAttribute("data-label"),
      probabilities: [...row.querySelectorAll(".slice")].map(
        (s) => s.getAttribute("data-p"),
      ),
    }));
    const expected = fixture.candidates.map((c, i) => ({
      rank: i + 1,
      label: c.label_name,
      probabilities: c.probabilities.map((p) => p.toFixed(2)),
    }));
    expect(rendered).toEqual(expected);
  });

  it("shows scores and document ids from the response", () => {
    const host = renderInto(fixture);
    const first = host.querySelector("tr.candidate")!;
    expect(first.querySelector(".score")!.textContent).toBe(
      fixture.candidates[0].score.toFixed(4),
    );
    expect(first.querySelector(".doc")!.textContent).toContain(
      fixture.candidates[0].doc_id,
    );
  });

  it("probability bar slices fill the whole bar", () => {
    const host = renderInto(fixture);
    for (const bar of host.querySelectorAll(".bar")) {
      const total = [...bar.querySelectorAll(".slice")]
        .map((s) => parseFloat((s as HTMLElement).style.width))
        .reduce((a, b) => a + b, 0);
      expect(total).toBeCloseTo(100, 1);
    }
  });

  it("labels the badge with a readable verdict", () => {
    const host = renderInto(fixture);
    expect(host.querySelector(".badge")!.textContent).toBe("Imitation Plagiarism");
  });

  it("flags a shuffled query as shuffle plagiarism in the top row", () => {
    const host = renderInto(shuffleFixture);
    const top = host.querySelector("tr.candidate .badge")!;
    expect(top.textContent).toBe("Shuffle Plagiarism");
    expect(Number(host.querySelector("tr.candidate")!.getAttribute("data-rank"))).toBe(1);
  });

  it("prints the three timing stages in the footer", () => {
    const host = renderInto(fixture);
    const footer = host.querySelector(".timings")!.textContent!;
    expect(footer).toContain("embed");
    expect(footer).toContain("retrieve");
    expect(footer).toContain("classify");
    expect(footer).toContain(fixture.timings.embed_ms.toFixed(1));
  });
});

describe("renderDetail", () => {
  it("shows query and segment text side by side", () => {
    const host = document.createElement("div");
    renderDetail(host, fixture.candidates[0], fixture.query_text);
    const sections = host.querySelectorAll("section");
    expect(sections.length).toBe(2);
    expect(sections[0].textContent).toContain(fixture.query_text);
    expect(sections[1].textContent).toContain(fixture.candidates[0].text);
    expect(sections[1].textContent).toContain(fixture.candidates[0].doc_id);
    expect(host.hidden).toBe(false);
  });

  it("clearDetail hides the pane again", () => {
    const host = document.createElement("div");
    renderDetail(host, fixture.candidates[0], fixture.query_text);
    clearDetail(host);
    expect(host.hidden).toBe(true);
    expect(host.innerHTML).toBe("");
  });
});

describe("showEmptyIndexGuidance", () => {
  it("tells the user to upload a corpus first", () => {
    const host = document.createElement("div");
    showEmptyIndexGuidance(host);
    expect(host.textContent).toContain("No segments are indexed yet");
    expect(host.textContent).toContain("Upload a corpus file");
  });
});

describe("helpers", () => {
  it("escapes markup in segment text", () => {
    expect(escapeHtml(`<b>"x" & y</b>`)).toBe("&lt;b&gt;&quot;x&quot; &amp; y&lt;/b&gt;");
  });

  it("truncates long snippets with an ellipsis", () => {
    const long = "word ".repeat(60);
    const cut = snippet(long);
    expect(cut.length).toBeLessThanOrEqual(140);
    expect(cut.endsWith("…")).toBe(true);
    expect(snippet("short text")).toBe("short text");
  });
});
