import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        environment: "jsdom",
        globalSetup: ["tests/setup.ts"],
        testTimeout: 20000,
        pool: "forks",
    },
});
