// Spawns the real map service for integration tests.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));
export const FIXTURE_TREE = resolve(HERE, "..", "..", "tests", "fixtures", "sample_tree");

export interface RunningService {
  base: string;
  child: ChildProcess;
  stop(): void;
}

export function buildFixtureModel(): string {
  const dir = mkdtempSync(join(tmpdir(), "codemap-viewer-"));
  const modelPath = join(dir, "model.json");
  const proc = spawnSync(
    "python3",
    ["-m", "codemap.cli", "build", FIXTURE_TREE, "-o", modelPath, "--resolution", "128"],
    { encoding: "utf-8" },
  );
  if (proc.status !== 0) {
    throw new Error(`model build failed: ${proc.stderr}`);
  }
  return modelPath;
}

export function startService(modelPath: string): Promise<RunningService> {
  const child = spawn(
    "python3",
    ["-m", "codemap.cli", "serve", modelPath, "--root", FIXTURE_TREE, "--port", "0"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  return new Promise((resolvePromise, rejectPromise) => {
    let buffer = "";
    const timer = setTimeout(() => rejectPromise(new Error("service did not start")), 20000);
    child.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/http:\/\/([\d.]+):(\d+)\//);
      if (match) {
        clearTimeout(timer);
        resolvePromise({
          base: `http://${match[1]}:${match[2]}`,
          child,
          stop: () => child.kill(),
        });
      }
    });
    child.stderr!.on("data", () => {});
    child.on("exit", (code) => {
      clearTimeout(timer);
      rejectPromise(new Error(`service exited early with code ${code}`));
    });
  });
}
