import { defineConfig } from 'vite';

export default defineConfig({
  build: {
    outDir: 'dist',
    emptyOutDir: true,
  },
  server: {
    proxy: {
      // dev-mode convenience: forward API calls to a locally running service
      '/api': 'http://127.0.0.1:8000',
    },
  },
  test: {
    environment: 'jsdom',
    globalSetup: './tests/setup/service.ts',
    setupFiles: ['./tests/setup/dom.ts'],
    testTimeout: 120000,
    hookTimeout: 120000,
  },
});
