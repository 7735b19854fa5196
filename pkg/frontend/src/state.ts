// the last query lives in the URL so a refresh replays it server-side

export interface QueryState {
  text: string;
  k: number;
  nprobe: number | null;
}

export function readQueryState(search: string): QueryState | null {
  const params = new URLSearchParams(search);
  const text = params.get("q");
  if (!text) return null;
  const k = clampK(Number(params.get("k") ?? "10"));
  const rawProbe = params.get("nprobe");
  const nprobe =
    rawProbe !== null && Number.isInteger(Number(rawProbe)) && Number(rawProbe) > 0
      ? Number(rawProbe)
      : null;
  return { text, k, nprobe };
}

export function writeQueryState(state: QueryState): string {
  const params = new URLSearchParams();
  params.set("q", state.text);
  params.set("k", String(state.k));
  if (state.nprobe !== null) params.set("nprobe", String(state.nprobe));
  return "?" + params.toString();
}

export function clampK(value: number): number {
  if (!Number.isFinite(value)) return 10;
  return Math.min(20, Math.max(1, Math.round(value)));
}
