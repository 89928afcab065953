import { defineConfig } from "vitest/config";

// The dev server proxies API calls to a locally running session service so
// the page can use same-origin paths.
export default defineConfig({
  server: {
    proxy: {
      "/sessions": "http://127.0.0.1:8000",
      "/presets": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    testTimeout: 120000,
    hookTimeout: 120000,
  },
});
