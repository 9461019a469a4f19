import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // tfjs on the pure-JS CPU backend is slow to warm up
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
