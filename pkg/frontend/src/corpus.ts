import type { CorpusSegment } from "./types";

export class CorpusParseError extends Error {
  constructor(
    message: string,
    public line: number,
  ) {
    super(`line ${line}: ${message}`);
  }
}

/**
 * Parse an uploaded corpus file (JSON lines, one segment per row).
 *
 * Validated client-side before the ingest call so a broken file reports
 * its line number instead of a server round trip. Blank lines are fine.
 */
export function parseCorpusFile(content: string): CorpusSegment[] {
  const segments: CorpusSegment[] = [];
  const seen = new Set<number>();
  const lines = content.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    const lineNo = i + 1;
    let row: unknown;
    try {
      row = JSON.parse(line);
    } catch {
      throw new CorpusParseError("not valid JSON", lineNo);
    }
    if (typeof row !== "object" || row === null || Array.isArray(row)) {
      throw new CorpusParseError("expected a JSON object", lineNo);
    }
    const rec = row as Record<string, unknown>;
    if (typeof rec.id !== "number" || !Number.isInteger(rec.id)) {
      throw new CorpusParseError("missing integer field \"id\"", lineNo);
    }
    if (typeof rec.doc_id !== "string" || !rec.doc_id) {
      throw new CorpusParseError("missing string field \"doc_id\"", lineNo);
    }
    if (typeof rec.text !== "string" || !rec.text.trim()) {
      throw new CorpusParseError("missing nonempty field \"text\"", lineNo);
    }
    if (seen.has(rec.id)) {
      throw new CorpusParseError(`duplicate segment id ${rec.id}`, lineNo);
    }
    seen.add(rec.id);
    segments.push({ id: rec.id, doc_id: rec.doc_id, text: rec.text });
  }
  if (segments.length === 0) {
    throw new CorpusParseError("file contains no segments", 1);
  }
  return segments;
}
