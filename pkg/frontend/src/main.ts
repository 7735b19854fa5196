import { ApiError, detect, ingest } from "./api";
import { CorpusParseError, parseCorpusFile } from "./corpus";
import { clampK, readQueryState, writeQueryState } from "./state";
import type { DetectionReport } from "./types";
import {
  clearDetail,
  hideBanner,
  renderDetail,
  renderReport,
  showBanner,
  showEmptyIndexGuidance,
  showToast,
} from "./view";

export const APP_HTML = `
<header>
  <h1>simscan console</h1>
  <p class="tagline">paste a suspect passage, compare it against the indexed library</p>
</header>
<div id="banner" class="banner" hidden></div>
<section class="panel" id="upload-panel">
  <h2>Library</h2>
  <label class="file-label">Upload corpus
    <input type="file" id="corpus-file" accept=".jsonl,.json,.txt">
  </label>
  <span id="upload-error" class="inline-error" hidden></span>
</section>
<section class="panel">
  <h2>Suspect text</h2>
  <form id="detect-form">
    <textarea id="query" rows="6" placeholder="Paste the passage to check"></textarea>
    <div class="controls">
      <label>Candidates <span id="k-value">10</span>
        <input type="range" id="k" min="1" max="20" step="1" value="10">
      </label>
      <label>Probe cells
        <input type="number" id="nprobe" min="1" placeholder="auto">
      </label>
      <button type="submit" id="run">Detect</button>
      <button type="button" id="download" disabled>Download JSON</button>
    </div>
  </form>
</section>
<section class="panel" id="results"></section>
<div id="detail" class="panel" hidden></div>
<div id="toast" class="toast"></div>
`;

interface AppState {
  report: DetectionReport | null;
  controller: AbortController | null;
  expandedRank: number | null;
}

function byId<T extends HTMLElement>(root: HTMLElement, id: string): T {
  const el = root.querySelector<T>("#" + id);
  if (!el) throw new Error("missing element #" + id);
  return el;
}

export function mountApp(root: HTMLElement): void {
  root.innerHTML = APP_HTML;
  const banner = byId<HTMLElement>(root, "banner");
  const fileInput = byId<HTMLInputElement>(root, "corpus-file");
  const uploadError = byId<HTMLElement>(root, "upload-error");
  const form = byId<HTMLFormElement>(root, "detect-form");
  const query = byId<HTMLTextAreaElement>(root, "query");
  const kInput = byId<HTMLInputElement>(root, "k");
  const kValue = byId<HTMLElement>(root, "k-value");
  const nprobeInput = byId<HTMLInputElement>(root, "nprobe");
  const downloadBtn = byId<HTMLButtonElement>(root, "download");
  const results = byId<HTMLElement>(root, "results");
  const detail = byId<HTMLElement>(root, "detail");
  const toast = byId<HTMLElement>(root, "toast");

  const state: AppState = { report: null, controller: null, expandedRank: null };

  async function uploadCorpus(file: File): Promise<void> {
    uploadError.hidden = true;
    try {
      const segments = parseCorpusFile(await file.text());
      const response = await ingest(segments);
      showToast(toast, `${response.count} segments indexed`);
    } catch (err) {
      if (err instanceof CorpusParseError || err instanceof ApiError) {
        uploadError.textContent = err.message;
        uploadError.hidden = false;
      } else {
        throw err;
      }
    } finally {
      // allow re-selecting the same file
      fileInput.value = "";
    }
  }

  function readNprobe(): number | null {
    const raw = nprobeInput.value.trim();
    if (!raw) return null;
    const value = Number(raw);
    return Number.isInteger(value) && value > 0 ? value : null;
  }

  async function runDetection(): Promise<void> {
    const text = query.value;
    if (!text.trim()) return;
    const k = clampK(Number(kInput.value));
    const nprobe = readNprobe();
    state.controller?.abort();
    const controller = new AbortController();
    state.controller = controller;
    hideBanner(banner);
    clearDetail(detail);
    state.expandedRank = null;
    try {
      const report = await detect(text, k, nprobe, controller.signal);
      if (controller !== state.controller) return;
      state.report = report;
      downloadBtn.disabled = false;
      renderReport(results, report);
      history.replaceState(null, "", writeQueryState({ text, k, nprobe }));
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (controller !== state.controller) return;
      if (err instanceof ApiError && err.emptyIndex) {
        showEmptyIndexGuidance(results);
      } else if (err instanceof ApiError) {
        showBanner(banner, err.message);
      } else {
        throw err;
      }
    }
  }

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (file) void uploadCorpus(file);
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void runDetection();
  });

  kInput.addEventListener("input", () => {
    kValue.textContent = kInput.value;
  });
  kInput.addEventListener("change", () => {
    kValue.textContent = kInput.value;
    if (state.report && query.value.trim()) void runDetection();
  });

  results.addEventListener("click", (event) => {
    const row = (event.target as HTMLElement).closest<HTMLElement>("tr.candidate");
    if (!row || !state.report) return;
    const rank = Number(row.dataset.rank);
    if (state.expandedRank === rank) {
      clearDetail(detail);
      state.expandedRank = null;
      return;
    }
    const candidate = state.report.candidates[rank - 1];
    if (!candidate) return;
    renderDetail(detail, candidate, state.report.query_text);
    state.expandedRank = rank;
  });

  downloadBtn.addEventListener("click", () => {
    if (!state.report) return;
    const blob = new Blob([JSON.stringify(state.report, null, 2)], {
      type: "application/json",
    });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = "detection-report.json";
    a.click();
    URL.revokeObjectURL(url);
  });

  const initial = readQueryState(location.search);
  if (initial) {
    query.value = initial.text;
    kInput.value = String(initial.k);
    kValue.textContent = String(initial.k);
    if (initial.nprobe !== null) nprobeInput.value = String(initial.nprobe);
    void runDetection();
  }
}
