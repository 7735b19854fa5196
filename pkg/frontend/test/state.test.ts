import { describe, expect, it } from "vitest";
import { clampK, readQueryState, writeQueryState } from "../src/state";

describe("query state in the URL", () => {
  it("round trips text, k and nprobe", () => {
    const state = { text: "ein Text mit Umlauten & Zeichen?", k: 7, nprobe: 4 };
    expect(readQueryState(writeQueryState(state))).toEqual(state);
  });

  it("omits nprobe when unset", () => {
    const search = writeQueryState({ text: "hello", k: 10, nprobe: null });
    expect(search).not.toContain("nprobe");
    expect(readQueryState(search)).toEqual({ text: "hello", k: 10, nprobe: null });
  });

  it("returns null without a query", () => {
    expect(readQueryState("")).toBeNull();
    expect(readQueryState("?k=5")).toBeNull();
  });

  it("falls back to defaults for junk parameters", () => {
    expect(readQueryState("?q=x&k=banana")).toEqual({ text: "x", k: 10, nprobe: null });
    expect(readQueryState("?q=x&k=500")).toEqual({ text: "x", k: 20, nprobe: null });
    expect(readQueryState("?q=x&nprobe=-2")).toEqual({
      text: "x",
      k: 10,
      nprobe: null,
    });
  });
});

describe("clampK", () => {
  it("keeps k inside the slider range", () => {
    expect(clampK(0)).toBe(1);
    expect(clampK(1)).toBe(1);
    expect(clampK(20)).toBe(20);
    expect(clampK(99)).toBe(20);
    expect(clampK(NaN)).toBe(10);
    expect(clampK(7.6)).toBe(8);
  });
});
