// Synthetic models for the unit tests (no service required).

import type { MapModel } from "../src/types.js";

export function flatGrid(resolution: number, height = 0): number[] {
  return new Array(resolution * resolution).fill(height);
}

export function emptyModel(): MapModel {
  return {
    formatVersion: 1,
    files: [],
    grid: { resolution: 16, seaLevel: 0.1, heights: flatGrid(16) },
    labels: { labels: [] },
    meta: {},
  };
}

export function smallModel(): MapModel {
  const heights = flatGrid(16);
  heights[8 * 16 + 8] = 1; // a single peak
  return {
    formatVersion: 1,
    files: [
      { path: "Alpha.java", x: 0.25, y: 0.5, loc: 40 },
      { path: "Beta.java", x: 0.5, y: 0.5, loc: 80 },
      { path: "Gamma.java", x: 0.5, y: 0.5, loc: 10 }, // coincident with Beta
      { path: "Delta.java", x: 0.9, y: 0.1, loc: 25 },
    ],
    grid: { resolution: 16, seaLevel: 0.1, heights },
    labels: {
      labels: [
        { text: "Beta", x: 0.5, y: 0.5, fontSize: 0.02, kind: "filename" },
        { text: "storage engine", x: 0.3, y: 0.3, fontSize: 0.035, kind: "keyword" },
      ],
    },
    meta: {},
  };
}
