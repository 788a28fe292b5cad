// @vitest-environment jsdom
//
// Boots the real page wiring (main.ts) inside jsdom and drives it with DOM
// events against a live service. jsdom has no 2d canvas, so drawing goes
// through the recording context; everything else is the browser code path.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { bootstrap } from "../src/main.js";
import type { ViewerController } from "../src/controller.js";
import { buildFixtureModel, startService, type RunningService } from "./service.js";
import { RecordingContext } from "./recording.js";

const HERE = dirname(fileURLToPath(import.meta.url));

let service: RunningService;
let controller: ViewerController;
let ctx: RecordingContext;

function canvas(): HTMLCanvasElement {
  return document.getElementById("map") as HTMLCanvasElement;
}

async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 25));
}

async function waitFor(cond: () => boolean, timeoutMs = 5000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!cond()) {
    if (Date.now() > deadline) {
      throw new Error("condition not met in time");
    }
    await settle();
  }
}

beforeAll(async () => {
  service = await startService(buildFixtureModel());
  const html = readFileSync(join(HERE, "..", "static", "index.html"), "utf-8");
  document.body.innerHTML = html.slice(html.indexOf("<body>") + 6, html.indexOf("</body>"));
  ctx = new RecordingContext();
  controller = bootstrap(document, () => ctx, service.base);
  await waitFor(() => controller.model !== null);
}, 60000);

afterAll(() => {
  service?.stop();
});

describe("page wiring in jsdom", () => {
  it("loads the model on boot and hides the error banner", async () => {
    expect(controller.model?.formatVersion).toBe(1);
    expect((document.getElementById("banner") as HTMLElement).hidden).toBe(true);
    expect(document.getElementById("status")!.textContent).toContain("10 files");
  });

  it("search via the input renders markers and a result list", async () => {
    const box = document.getElementById("search-box") as HTMLInputElement;
    box.value = "settings";
    ctx.reset();
    box.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await waitFor(() => document.querySelectorAll("#results li").length > 0);
    const rows = document.querySelectorAll("#results li");
    const markers = ctx.arcs.filter((a) => a.filled && a.fillStyle.includes("220"));
    expect(markers.length).toBe(rows.length);
  });

  it("double-clicking the canvas opens the nearest file panel", async () => {
    const file = controller.model!.files[2];
    const p = controller.view.worldToScreen(file.x, file.y);
    canvas().dispatchEvent(
      new MouseEvent("dblclick", { clientX: p.x + 4, clientY: p.y + 4, bubbles: true }),
    );
    const panel = document.getElementById("file-panel") as HTMLElement;
    await waitFor(() => !panel.hidden);
    expect(document.getElementById("file-title")!.textContent).toBe(file.path);
    expect(document.getElementById("file-body")!.textContent).toContain("class");
  });

  it("wheel zoom keeps the cursor point fixed within 1px", async () => {
    const cursor = { x: 300, y: 400 };
    const world = controller.view.screenToWorld(cursor.x, cursor.y);
    canvas().dispatchEvent(
      new WheelEvent("wheel", { clientX: cursor.x, clientY: cursor.y, deltaY: -600, bubbles: true }),
    );
    await settle();
    const after = controller.view.worldToScreen(world.x, world.y);
    expect(Math.hypot(after.x - cursor.x, after.y - cursor.y)).toBeLessThan(1);
    expect(controller.view.zoom).toBeGreaterThan(1);
  });

  it("callers input draws arrows; clearing removes them", async () => {
    const box = document.getElementById("callers-box") as HTMLInputElement;
    box.value = "getSettingOrDefault";
    box.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await waitFor(() => controller.layers.flow !== null);
    box.value = "";
    box.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await waitFor(() => controller.layers.flow === null);
  });

  it("anchor mode round-trips through the service", async () => {
    (document.getElementById("anchor-toggle") as HTMLInputElement).checked = true;
    document.getElementById("anchor-toggle")!.dispatchEvent(new Event("change", { bubbles: true }));
    (document.getElementById("anchor-prefix") as HTMLInputElement).value = "Menu";
    const target = controller.view.worldToScreen(0.3, 0.3);
    canvas().dispatchEvent(
      new MouseEvent("click", { clientX: target.x, clientY: target.y, bubbles: true }),
    );
    await waitFor(() => {
      const menu = controller.model!.files.find((f) => f.path === "MenuAction.java")!;
      return Math.hypot(menu.x - 0.3, menu.y - 0.3) < 0.1;
    });
  });
});
