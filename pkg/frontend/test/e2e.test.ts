// End-to-end: drive the real service through the UI's action layer and
// require the same final model report the CLI transcript produces.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { SessionPanel } from "../src/state";

const REPO_ROOT = resolve(__dirname, "..", "..");
const THEORY_PATH = join(REPO_ROOT, "theories", "johnny.thy");
const PORT = 8799;
const BASE = `http://127.0.0.1:${PORT}`;
const FORALL = "forall u:entity. (man(u) -> walk(u))";

let server: ChildProcess;

async function waitForHealth(): Promise<void> {
  const deadline = Date.now() + 15_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("service did not come up");
}

function runCli(args: string[]): Promise<{ stdout: string; code: number }> {
  return new Promise((resolvePromise, rejectPromise) => {
    const child = spawn("python3", ["-m", "gdiagram.cli", ...args], {
      cwd: REPO_ROOT,
    });
    let stdout = "";
    let stderr = "";
    child.stdout.on("data", (chunk) => (stdout += chunk));
    child.stderr.on("data", (chunk) => (stderr += chunk));
    child.on("error", rejectPromise);
    child.on("close", (code) =>
      code === 0
        ? resolvePromise({ stdout, code })
        : rejectPromise(new Error(`cli exited ${code}: ${stderr}`)),
    );
  });
}

function lastModelBlock(stdout: string): string {
  const at = stdout.lastIndexOf("MODEL\n");
  if (at < 0) throw new Error("no MODEL block in CLI output");
  const block = stdout.slice(at);
  const end = block.indexOf("\n> ");
  return (end < 0 ? block : block.slice(0, end)).trimEnd();
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "gdiagram.cli", "--serve", `127.0.0.1:${PORT}`], {
    cwd: REPO_ROOT,
    stdio: "ignore",
  });
  await waitForHealth();
}, 30_000);

afterAll(() => {
  server.kill();
});

describe("explorer against the live service", () => {
  it("runs the force-true walkthrough and matches the CLI's final report", async () => {
    const fs = await import("node:fs/promises");
    const theory = await fs.readFile(THEORY_PATH, "utf8");

    const panel = new SessionPanel(new ApiClient(BASE));
    await panel.loadTheory(theory, { name: "johnny" });
    expect(panel.state.error).toBeNull();
    expect(panel.state.reportText).toContain("PRED walk: {J, M, B?}");
    // no pending choice before any evaluation
    expect(panel.state.pending).toBeNull();

    await panel.evalFormula(FORALL);
    expect(panel.state.error).toBeNull();
    expect(panel.state.lastValue).toBe("unknown");
    // the modal appears exactly when the server returns a pending choice
    expect(panel.state.pending?.atom).toBe("walk(B)");
    expect(panel.state.grid).toEqual([{ world: "w0", time: "t0", value: "unknown" }]);

    await panel.resolvePending("force-true");
    expect(panel.state.error).toBeNull();
    expect(panel.state.lastValue).toBe("true");
    expect(panel.state.pending).toBeNull();
    expect(panel.state.grid).toEqual([{ world: "w0", time: "t0", value: "true" }]);
    expect(panel.state.history).toEqual(["force walk(B) true"]);
    const walkRow = panel.state.report?.preds.find((p) => p.name === "walk");
    expect(walkRow?.entries).toContainEqual({ label: "B", unknown: false });

    // same walkthrough as a CLI transcript; final model reports must agree
    const dir = mkdtempSync(join(tmpdir(), "explorer-e2e-"));
    const transcript = join(dir, "walkthrough.txt");
    writeFileSync(
      transcript,
      [`eval ${FORALL}`, "force walk(B) true", `eval ${FORALL}`, "model", ""].join("\n"),
    );
    const cli = await runCli(["--theory", THEORY_PATH, "--transcript", transcript]);
    expect(lastModelBlock(cli.stdout)).toBe(panel.state.reportText.trimEnd());
  }, 60_000);

  it("undo through the UI reverts the snapshot", async () => {
    const fs = await import("node:fs/promises");
    const theory = await fs.readFile(THEORY_PATH, "utf8");

    const panel = new SessionPanel(new ApiClient(BASE));
    await panel.loadTheory(theory, { name: "johnny" });
    const baseReport = panel.state.reportText;

    await panel.evalFormula(FORALL);
    await panel.resolvePending("force-false");
    expect(panel.state.lastValue).toBe("false");
    expect(panel.state.reportText).toContain("PRED walk: {J, M}");

    await panel.undo();
    expect(panel.state.error).toBeNull();
    expect(panel.state.reportText).toBe(baseReport);
    expect(panel.state.lastValue).toBe("unknown");
    expect(panel.state.pending?.atom).toBe("walk(B)");
    expect(panel.state.history).toEqual([]);
  }, 60_000);

  it("surfaces server-side errors inline", async () => {
    const panel = new SessionPanel(new ApiClient(BASE));
    await panel.loadTheory("sort entity\nconst J :\n");
    expect(panel.state.error).toMatch(/sort|const/);
    expect(panel.state.sessionId).toBeNull();
  }, 30_000);
});
