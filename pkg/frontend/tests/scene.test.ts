import { describe, expect, it } from "vitest";

import {
  FLOW_WIDTH_PX,
  MARKER_BASE_PX,
  WATER_COLOR,
  computeContours,
  drawScene,
  emptyLayers,
  isoLines,
} from "../src/scene.js";
import type { FlowResponse } from "../src/types.js";
import { ViewTransform } from "../src/view.js";
import { emptyModel, flatGrid, smallModel } from "./fixtures.js";
import { RecordingContext } from "./recording.js";

describe("drawScene", () => {
  it("renders an empty model as water only, without crashing", () => {
    const ctx = new RecordingContext();
    drawScene(ctx, emptyModel(), new ViewTransform(960, 960), emptyLayers());
    expect(ctx.fillRects.length).toBe(1);
    expect(ctx.fillRects[0].fillStyle).toBe(WATER_COLOR);
    expect(ctx.texts.length).toBe(0);
    expect(ctx.arcs.length).toBe(0);
  });

  it("draws one marker per search hit with sqrt-count radii", () => {
    const ctx = new RecordingContext();
    const layers = emptyLayers();
    layers.markers = [
      { fileIndex: 0, magnitude: 1, tag: "q" },
      { fileIndex: 1, magnitude: 2, tag: "q" },
      { fileIndex: 3, magnitude: 3, tag: "q" },
    ];
    drawScene(ctx, smallModel(), new ViewTransform(960, 960), layers);
    const markers = ctx.arcs.filter((a) => a.filled && a.fillStyle.includes("220"));
    expect(markers.length).toBe(3);
    expect(markers[1].r / markers[0].r).toBeCloseTo(2, 9);
    expect(markers[0].r).toBeCloseTo(MARKER_BASE_PX, 9);
  });

  it("draws every model label", () => {
    const ctx = new RecordingContext();
    drawScene(ctx, smallModel(), new ViewTransform(960, 960), emptyLayers());
    expect(ctx.texts.map((t) => t.text)).toEqual(["Beta", "storage engine"]);
    expect(ctx.texts[1].font).toContain("bold");
  });

  it("strokes flow edges with sqrt-flow widths", () => {
    const ctx = new RecordingContext();
    const layers = emptyLayers();
    const flow: FlowResponse = {
      kind: "flow",
      source: [0.25, 0.5],
      nodes: [
        { x: 0.25, y: 0.5, flow: 5 },
        { x: 0.6, y: 0.6, flow: 5 },
        { x: 0.7, y: 0.65, flow: 4 },
        { x: 0.72, y: 0.55, flow: 1 },
      ],
      edges: [
        [0, 1],
        [1, 2],
        [1, 3],
      ],
      leaves: [
        { node: 2, file: 1 },
        { node: 3, file: 3 },
      ],
    };
    layers.flow = flow;
    drawScene(ctx, smallModel(), new ViewTransform(960, 960), layers);
    const flowStrokes = ctx.strokes.filter((s) => s.strokeStyle.includes("180"));
    expect(flowStrokes.length).toBe(3);
    // Trunk carries flow 5, branch flow 4: widths scale with sqrt(flow).
    expect(flowStrokes[0].lineWidth / flowStrokes[1].lineWidth).toBeCloseTo(
      Math.sqrt(5 / 4),
      9,
    );
    expect(flowStrokes[0].lineWidth).toBeCloseTo(FLOW_WIDTH_PX * Math.sqrt(5), 9);
  });

  it("falls back to per-cell land rectangles without an offscreen canvas", () => {
    const ctx = new RecordingContext();
    drawScene(ctx, smallModel(), new ViewTransform(960, 960), emptyLayers());
    // one water rect + exactly one land cell (the single peak)
    expect(ctx.fillRects.length).toBe(2);
  });
});

describe("isoLines", () => {
  it("finds no lines on a flat grid", () => {
    const grid = { resolution: 16, seaLevel: 0.1, heights: flatGrid(16) };
    expect(isoLines(grid, 0.5)).toEqual([]);
  });

  it("draws a closed ring around a peak", () => {
    const res = 24;
    const heights = flatGrid(res);
    for (let r = 0; r < res; r++) {
      for (let c = 0; c < res; c++) {
        const dx = (c - 12) / res;
        const dy = (r - 12) / res;
        heights[r * res + c] = Math.exp(-(dx * dx + dy * dy) / 0.01);
      }
    }
    const grid = { resolution: res, seaLevel: 0.1, heights };
    const lines = isoLines(grid, 0.5);
    expect(lines.length).toBe(1);
    const ring = lines[0];
    expect(ring[0][0]).toBeCloseTo(ring[ring.length - 1][0], 12);
    expect(ring[0][1]).toBeCloseTo(ring[ring.length - 1][1], 12);
  });

  it("computeContours includes the coastline", () => {
    const res = 24;
    const heights = flatGrid(res);
    heights[12 * res + 12] = 1;
    heights[12 * res + 13] = 0.8;
    const layer = computeContours({ resolution: res, seaLevel: 0.1, heights });
    expect(layer.coast.length).toBeGreaterThan(0);
    expect(layer.rings.length).toBeGreaterThan(0);
  });
});
