import { defineConfig } from "vitest/config";

// base "./" keeps asset URLs relative so the bundle works mounted at /ui
export default defineConfig({
  base: "./",
  build: { outDir: "dist" },
  server: {
    proxy: {
      // during `vite dev`, forward API calls to a running engine
      "/detect": "http://127.0.0.1:8000",
      "/ingest": "http://127.0.0.1:8000",
      "/health": "http://127.0.0.1:8000",
      "/config": "http://127.0.0.1:8000",
      "/segments": "http://127.0.0.1:8000",
      "/train": "http://127.0.0.1:8000",
      "/jobs": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
  },
});
