// Canvas drawing of the base map and overlay layers.
//
// Everything drawn here derives from the server JSON: the heights grid is
// shaded and contoured client-side purely for display, never recomputed.

import type { FlowResponse, MapGrid, MapModel, Marker } from "./types.js";
import type { ViewTransform } from "./view.js";

export const WATER_COLOR = "#9ec4e1";
export const MARKER_COLOR = "rgba(220, 60, 50, 0.75)";
export const FLOW_COLOR = "rgba(60, 60, 180, 0.7)";
export const SELECT_COLOR = "#d8512f";
const CONTOUR_COLOR = "rgba(128, 112, 96, 0.55)";
const COAST_COLOR = "rgba(90, 110, 130, 0.9)";
const LABEL_COLOR = "#282828";
const KEYWORD_COLOR = "#46466e";
const SHADE_FLOOR = 0.35;
const CONTOUR_INTERVAL = 0.1;

export const MARKER_BASE_PX = 5; // marker radius = base * magnitude
export const FLOW_WIDTH_PX = 2.2; // stroke width = base * sqrt(flow)

// Hypsometric ramp, matching the server palette.
const RAMP: Array<[number, [number, number, number]]> = [
  [0.0, [148, 191, 139]],
  [0.25, [168, 198, 143]],
  [0.5, [205, 196, 150]],
  [0.75, [192, 163, 128]],
  [0.9, [200, 200, 200]],
  [1.0, [245, 245, 245]],
];

/** Subset of CanvasRenderingContext2D the scene needs; tests stub this. */
export interface DrawContext {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  textAlign: CanvasTextAlign;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
  drawImage(image: CanvasImageSource, dx: number, dy: number, dw: number, dh: number): void;
}

function rampColor(t: number): [number, number, number] {
  const clamped = Math.min(1, Math.max(0, t));
  for (let i = 1; i < RAMP.length; i++) {
    const [t1, c1] = RAMP[i];
    if (clamped <= t1) {
      const [t0, c0] = RAMP[i - 1];
      const f = t1 > t0 ? (clamped - t0) / (t1 - t0) : 0;
      return [
        c0[0] + f * (c1[0] - c0[0]),
        c0[1] + f * (c1[1] - c0[1]),
        c0[2] + f * (c1[2] - c0[2]),
      ];
    }
  }
  return RAMP[RAMP.length - 1][1];
}

function heightAt(grid: MapGrid, r: number, c: number): number {
  return grid.heights[r * grid.resolution + c];
}

/** Lambertian shade from central differences, light from the northwest. */
function shadeAt(grid: MapGrid, r: number, c: number): number {
  const res = grid.resolution;
  const spacing = 1 / res;
  const left = heightAt(grid, r, Math.max(c - 1, 0));
  const right = heightAt(grid, r, Math.min(c + 1, res - 1));
  const down = heightAt(grid, r ? r - 1 : 0, c);
  const up = heightAt(grid, Math.min(r + 1, res - 1), c);
  const spanX = (c === 0 || c === res - 1 ? 1 : 2) * spacing;
  const spanY = (r === 0 || r === res - 1 ? 1 : 2) * spacing;
  const zScale = 0.05;
  const nx = (-zScale * (right - left)) / spanX;
  const ny = (-zScale * (up - down)) / spanY;
  const norm = Math.sqrt(nx * nx + ny * ny + 1);
  const az = (315 * Math.PI) / 180;
  const alt = (45 * Math.PI) / 180;
  const lx = Math.sin(az) * Math.cos(alt);
  const ly = Math.cos(az) * Math.cos(alt);
  const lz = Math.sin(alt);
  return Math.max(0, (nx * lx + ny * ly + lz) / norm);
}

function landColor(grid: MapGrid, r: number, c: number): string {
  const t = (heightAt(grid, r, c) - grid.seaLevel) / Math.max(1 - grid.seaLevel, 1e-9);
  const [cr, cg, cb] = rampColor(t);
  const bright = SHADE_FLOOR + (1 - SHADE_FLOOR) * shadeAt(grid, r, c);
  return `rgb(${Math.round(cr * bright)}, ${Math.round(cg * bright)}, ${Math.round(cb * bright)})`;
}

/**
 * Pre-renders the shaded land into an offscreen canvas (one pixel per grid
 * cell, row 0 north). Returns null where no 2d canvas exists (tests); the
 * scene then falls back to per-cell rectangles.
 */
export function buildTerrainImage(grid: MapGrid): CanvasImageSource | null {
  if (typeof document === "undefined") {
    return null;
  }
  const canvas = document.createElement("canvas");
  canvas.width = grid.resolution;
  canvas.height = grid.resolution;
  const ctx = canvas.getContext("2d");
  if (!ctx || typeof ctx.createImageData !== "function") {
    return null;
  }
  const res = grid.resolution;
  const image = ctx.createImageData(res, res);
  for (let r = 0; r < res; r++) {
    for (let c = 0; c < res; c++) {
      const offset = ((res - 1 - r) * res + c) * 4;
      if (heightAt(grid, r, c) >= grid.seaLevel) {
        const t = (heightAt(grid, r, c) - grid.seaLevel) / Math.max(1 - grid.seaLevel, 1e-9);
        const [cr, cg, cb] = rampColor(t);
        const bright = SHADE_FLOOR + (1 - SHADE_FLOOR) * shadeAt(grid, r, c);
        image.data[offset] = Math.round(cr * bright);
        image.data[offset + 1] = Math.round(cg * bright);
        image.data[offset + 2] = Math.round(cb * bright);
        image.data[offset + 3] = 255;
      } else {
        image.data[offset + 3] = 0;
      }
    }
  }
  ctx.putImageData(image, 0, 0);
  return canvas;
}

export type Polyline = Array<[number, number]>; // world coordinates

/** Marching squares over the JSON heights; used for contour display only. */
export function isoLines(grid: MapGrid, level: number): Polyline[] {
  const res = grid.resolution;
  const step = 1 / res;
  const inside = (r: number, c: number) => heightAt(grid, r, c) >= level;

  type EdgeKey = string;
  const pointOf = new Map<EdgeKey, [number, number]>();
  const adjacency = new Map<EdgeKey, EdgeKey[]>();

  const edgePoint = (kind: "h" | "v", r: number, c: number): EdgeKey => {
    const key = `${kind}:${r}:${c}`;
    if (!pointOf.has(key)) {
      const v0 = heightAt(grid, r, c);
      const v1 = kind === "h" ? heightAt(grid, r, c + 1) : heightAt(grid, r + 1, c);
      const t = (level - v0) / (v1 - v0);
      const x = (c + 0.5) * step + (kind === "h" ? t * step : 0);
      const y = (r + 0.5) * step + (kind === "v" ? t * step : 0);
      pointOf.set(key, [x, y]);
    }
    return key;
  };

  const addSegment = (a: EdgeKey, b: EdgeKey) => {
    for (const [from, to] of [[a, b], [b, a]] as const) {
      const nbrs = adjacency.get(from);
      if (nbrs) {
        nbrs.push(to);
      } else {
        adjacency.set(from, [to]);
      }
    }
  };

  const SEGMENTS: Record<number, Array<[string, string]>> = {
    1: [["L", "B"]], 2: [["B", "R"]], 3: [["L", "R"]], 4: [["R", "T"]],
    6: [["B", "T"]], 7: [["L", "T"]], 8: [["T", "L"]], 9: [["B", "T"]],
    11: [["T", "R"]], 12: [["R", "L"]], 13: [["B", "R"]], 14: [["L", "B"]],
  };

  for (let r = 0; r < res - 1; r++) {
    for (let c = 0; c < res - 1; c++) {
      const code =
        (inside(r, c) ? 1 : 0) |
        (inside(r, c + 1) ? 2 : 0) |
        (inside(r + 1, c + 1) ? 4 : 0) |
        (inside(r + 1, c) ? 8 : 0);
      if (code === 0 || code === 15) {
        continue;
      }
      const keys: Record<string, EdgeKey> = {
        B: edgePoint("h", r, c),
        R: edgePoint("v", r, c + 1),
        T: edgePoint("h", r + 1, c),
        L: edgePoint("v", r, c),
      };
      let pairs: Array<[string, string]>;
      if (code === 5 || code === 10) {
        const center =
          (heightAt(grid, r, c) + heightAt(grid, r, c + 1) +
            heightAt(grid, r + 1, c + 1) + heightAt(grid, r + 1, c)) / 4;
        const centerInside = center >= level;
        if (code === 5) {
          pairs = centerInside ? [["L", "T"], ["B", "R"]] : [["L", "B"], ["R", "T"]];
        } else {
          pairs = centerInside ? [["L", "B"], ["R", "T"]] : [["L", "T"], ["B", "R"]];
        }
      } else {
        pairs = SEGMENTS[code];
      }
      for (const [a, b] of pairs) {
        addSegment(keys[a], keys[b]);
      }
    }
  }

  const used = new Set<string>();
  const segKey = (a: EdgeKey, b: EdgeKey) => (a < b ? `${a}|${b}` : `${b}|${a}`);
  const walk = (start: EdgeKey): EdgeKey[] => {
    const chain = [start];
    let current = start;
    for (;;) {
      let next: EdgeKey | null = null;
      for (const cand of adjacency.get(current) ?? []) {
        if (!used.has(segKey(current, cand))) {
          used.add(segKey(current, cand));
          next = cand;
          break;
        }
      }
      if (next === null) {
        return chain;
      }
      chain.push(next);
      current = next;
    }
  };

  const lines: Polyline[] = [];
  for (const [key, nbrs] of adjacency) {
    if (nbrs.length === 1 && !nbrs.every((n) => used.has(segKey(key, n)))) {
      lines.push(walk(key).map((k) => pointOf.get(k)!));
    }
  }
  for (const [key, nbrs] of adjacency) {
    if (!nbrs.every((n) => used.has(segKey(key, n)))) {
      lines.push(walk(key).map((k) => pointOf.get(k)!));
    }
  }
  return lines;
}

export interface ContourLayer {
  coast: Polyline[];
  rings: Polyline[];
}

export function computeContours(grid: MapGrid): ContourLayer {
  const rings: Polyline[] = [];
  for (let m = 1; grid.seaLevel + m * CONTOUR_INTERVAL < 1; m++) {
    rings.push(...isoLines(grid, grid.seaLevel + m * CONTOUR_INTERVAL));
  }
  return { coast: isoLines(grid, grid.seaLevel), rings };
}

export interface SceneLayers {
  terrain: CanvasImageSource | null;
  contours: ContourLayer | null;
  markers: Marker[];
  flow: FlowResponse | null;
  heat: number[] | null;
  selected: number | null;
}

export function emptyLayers(): SceneLayers {
  return { terrain: null, contours: null, markers: [], flow: null, heat: null, selected: null };
}

function strokePolyline(ctx: DrawContext, view: ViewTransform, line: Polyline): void {
  ctx.beginPath();
  for (let i = 0; i < line.length; i++) {
    const p = view.worldToScreen(line[i][0], line[i][1]);
    if (i === 0) {
      ctx.moveTo(p.x, p.y);
    } else {
      ctx.lineTo(p.x, p.y);
    }
  }
  ctx.stroke();
}

export function drawScene(
  ctx: DrawContext,
  model: MapModel,
  view: ViewTransform,
  layers: SceneLayers,
): void {
  ctx.globalAlpha = 1;
  ctx.fillStyle = WATER_COLOR;
  ctx.fillRect(0, 0, view.width, view.height);

  const grid = model.grid;
  const res = grid.resolution;
  const origin = view.worldToScreen(0, 1); // top-left corner of the map
  const side = view.width * view.zoom;

  if (layers.terrain) {
    ctx.drawImage(layers.terrain, origin.x, origin.y, side, view.height * view.zoom);
  } else {
    // Per-cell fallback when no offscreen canvas is available.
    const cell = side / res;
    for (let r = 0; r < res; r++) {
      for (let c = 0; c < res; c++) {
        if (heightAt(grid, r, c) < grid.seaLevel) {
          continue;
        }
        ctx.fillStyle = landColor(grid, r, c);
        const p = view.worldToScreen(c / res, (r + 1) / res);
        ctx.fillRect(p.x, p.y, cell + 0.5, cell + 0.5);
      }
    }
  }

  if (layers.contours) {
    ctx.lineWidth = 0.6;
    ctx.strokeStyle = CONTOUR_COLOR;
    for (const ring of layers.contours.rings) {
      strokePolyline(ctx, view, ring);
    }
    ctx.lineWidth = 1.2;
    ctx.strokeStyle = COAST_COLOR;
    for (const coast of layers.contours.coast) {
      strokePolyline(ctx, view, coast);
    }
  }

  if (layers.heat) {
    for (let i = 0; i < layers.heat.length && i < model.files.length; i++) {
      const intensity = layers.heat[i];
      if (intensity <= 0) {
        continue;
      }
      const p = view.worldToScreen(model.files[i].x, model.files[i].y);
      ctx.globalAlpha = 0.55 * intensity;
      ctx.fillStyle = "rgb(255, 140, 0)";
      ctx.beginPath();
      ctx.arc(p.x, p.y, 0.035 * view.width, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.globalAlpha = 1;
  }

  for (const marker of layers.markers) {
    const file = model.files[marker.fileIndex];
    if (!file) {
      continue;
    }
    const p = view.worldToScreen(file.x, file.y);
    ctx.fillStyle = MARKER_COLOR;
    ctx.beginPath();
    ctx.arc(p.x, p.y, MARKER_BASE_PX * marker.magnitude, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (layers.flow && layers.flow.nodes.length > 0) {
    ctx.strokeStyle = FLOW_COLOR;
    for (const [parent, child] of layers.flow.edges) {
      const a = layers.flow.nodes[parent];
      const b = layers.flow.nodes[child];
      const pa = view.worldToScreen(a.x, a.y);
      const pb = view.worldToScreen(b.x, b.y);
      ctx.lineWidth = FLOW_WIDTH_PX * Math.sqrt(b.flow);
      ctx.beginPath();
      ctx.moveTo(pa.x, pa.y);
      ctx.lineTo(pb.x, pb.y);
      ctx.stroke();
    }
  }

  if (layers.selected !== null && model.files[layers.selected]) {
    const file = model.files[layers.selected];
    const p = view.worldToScreen(file.x, file.y);
    ctx.strokeStyle = SELECT_COLOR;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(p.x, p.y, HIGHLIGHT_RADIUS_PX, 0, 2 * Math.PI);
    ctx.stroke();
  }

  ctx.textAlign = "center";
  for (const label of model.labels.labels) {
    const p = view.worldToScreen(label.x, label.y);
    const px = Math.max(label.fontSize * view.width * Math.sqrt(view.zoom), 9);
    ctx.globalAlpha = label.opacity ?? 1;
    ctx.fillStyle = label.kind === "keyword" ? KEYWORD_COLOR : LABEL_COLOR;
    ctx.font = `${label.kind === "keyword" ? "bold " : ""}${px.toFixed(1)}px sans-serif`;
    ctx.fillText(label.text, p.x, p.y);
  }
  ctx.globalAlpha = 1;
}

export const HIGHLIGHT_RADIUS_PX = 9;
