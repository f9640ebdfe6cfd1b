/**
 * Global test setup: build a desk-scale demo model (cached across runs) and
 * serve it with the real classification service for the e2e tests.
 */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { existsSync } from "node:fs";
import { resolve } from "node:path";

const REPO_ROOT = resolve(__dirname, "../..");
const MODEL_DIR = resolve(__dirname, "../.model-cache");
const PORT = 8977;

export const SERVICE_URL = `http://127.0.0.1:${PORT}`;

let serviceProcess: ChildProcess | undefined;

async function waitForHealth(url: string, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${url}/health`);
      if (resp.ok) {
        const body = (await resp.json()) as { model_loaded: boolean };
        if (body.model_loaded) return;
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`service at ${url} did not become healthy`);
}

export async function setup(): Promise<void> {
  if (!existsSync(resolve(MODEL_DIR, "bundle.json"))) {
    const build = spawnSync(
      "python3",
      [
        resolve(REPO_ROOT, "scripts/make_demo_model.py"),
        MODEL_DIR,
        "--classes",
        "15",
        "--per-class",
        "30",
      ],
      { cwd: REPO_ROOT, stdio: "inherit", timeout: 220000 },
    );
    if (build.status !== 0) {
      throw new Error("failed to build the demo model");
    }
  }

  serviceProcess = spawn(
    "python3",
    [
      "-m",
      "pqdtw.cli",
      "serve",
      "--model",
      resolve(MODEL_DIR, "bundle.json"),
      "--port",
      String(PORT),
    ],
    { cwd: REPO_ROOT, stdio: "inherit" },
  );
  process.env.PQDTW_TEST_SERVICE = SERVICE_URL;
  process.env.PQDTW_TEST_MODEL_DIR = MODEL_DIR;
  await waitForHealth(SERVICE_URL, 60000);

  // one throwaway request so timing tests measure the steady state
  await fetch(`${SERVICE_URL}/classify?k=1`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify([
      [
        { x: 0, y: 0, t: 0 },
        { x: 50, y: 10, t: 20 },
        { x: 90, y: 60, t: 40 },
      ],
    ]),
  });
}

export async function teardown(): Promise<void> {
  serviceProcess?.kill("SIGTERM");
}
