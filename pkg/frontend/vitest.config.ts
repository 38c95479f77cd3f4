import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 600000,
    hookTimeout: 60000,
    // the contract suite drives one shared backend process
    fileParallelism: false,
  },
});
