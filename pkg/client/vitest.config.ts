import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.spec.ts"],
    testTimeout: 60000,
    hookTimeout: 30000,
    // the suite shares one live engine process; run files serially
    fileParallelism: false,
  },
});
