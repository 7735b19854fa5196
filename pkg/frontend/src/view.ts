import type { Candidate, DetectionReport } from "./types";
import { LABEL_TITLES } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function snippet(text: string, limit = 140): string {
  return text.length <= limit ? text : text.slice(0, limit - 1).trimEnd() + "…";
}

const BAR_CLASSES = ["p-none", "p-imitation", "p-shuffle"];

function probabilityCell(probs: number[]): string {
  // one stacked bar per row: slice widths are the probabilities, so the
  // bar always fills to 100% no matter how rounding lands
  const slices = probs
    .map(
      (p, i) =>
        `<span class="slice ${BAR_CLASSES[i]}" data-p="${p.toFixed(2)}"` +
        ` style="width:${(p * 100).toFixed(3)}%"></span>`,
    )
    .join("");
  const legend = probs
    .map((p, i) => `<span class="${BAR_CLASSES[i]}">${p.toFixed(2)}</span>`)
    .join(" ");
  return `<div class="bar">${slices}</div><div class="legend">${legend}</div>`;
}

function candidateRow(c: Candidate, rank: number): string {
  const title = LABEL_TITLES[c.label_name] ?? c.label_name;
  return (
    `<tr class="candidate" data-rank="${rank}" data-id="${c.id}">` +
    `<td class="rank">${rank}</td>` +
    `<td class="doc">${escapeHtml(c.doc_id)}<span class="seg">#${c.id}</span></td>` +
    `<td class="text">${escapeHtml(snippet(c.text))}</td>` +
    `<td class="score">${c.score.toFixed(4)}</td>` +
    `<td class="verdict"><span class="badge ${c.label_name}" data-label="${c.label_name}">${title}</span></td>` +
    `<td class="probs">${probabilityCell(c.probabilities)}</td>` +
    `</tr>`
  );
}

/** Render a detection report as returned by the engine, order untouched. */
export function renderReport(container: HTMLElement, report: DetectionReport): void {
  const rows = report.candidates.map((c, i) => candidateRow(c, i + 1)).join("");
  const t = report.timings;
  container.innerHTML =
    `<table class="results"><thead><tr>` +
    `<th>#</th><th>Document</th><th>Segment</th><th>Score</th>` +
    `<th>Verdict</th><th>Probabilities</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>` +
    `<p class="timings">embed ${t.embed_ms.toFixed(1)} ms · ` +
    `retrieve ${t.retrieve_ms.toFixed(1)} ms · ` +
    `classify ${t.classify_ms.toFixed(1)} ms</p>`;
}

/** Side-by-side comparison of the query and one stored segment. */
export function renderDetail(
  host: HTMLElement,
  candidate: Candidate,
  queryText: string,
): void {
  host.innerHTML =
    `<div class="compare">` +
    `<section><h3>Suspect text</h3><p>${escapeHtml(queryText)}</p></section>` +
    `<section><h3>${escapeHtml(candidate.doc_id)} segment #${candidate.id}</h3>` +
    `<p>${escapeHtml(candidate.text)}</p></section>` +
    `</div>`;
  host.hidden = false;
}

export function clearDetail(host: HTMLElement): void {
  host.innerHTML = "";
  host.hidden = true;
}

export function showBanner(el: HTMLElement, message: string): void {
  el.textContent = message;
  el.hidden = false;
}

export function hideBanner(el: HTMLElement): void {
  el.textContent = "";
  el.hidden = true;
}

/** Shown when detect hits an engine with nothing ingested yet. */
export function showEmptyIndexGuidance(container: HTMLElement): void {
  container.innerHTML =
    `<div class="guidance">No segments are indexed yet. ` +
    `Upload a corpus file (JSON lines with id, doc_id and text) ` +
    `to build the library, then run detection again.</div>`;
}

export function showToast(el: HTMLElement, message: string): void {
  el.textContent = message;
  el.classList.add("visible");
  window.setTimeout(() => el.classList.remove("visible"), 4000);
}
