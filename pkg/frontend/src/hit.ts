// Screen-space hit testing for file points.

import type { MapModel } from "./types.js";
import type { ViewTransform } from "./view.js";

export const HIT_RADIUS_PX = 12;

/**
 * Nearest file within the hit radius of a screen point, or null over water.
 * Strict comparison keeps the first of coincident files, i.e. path order
 * (model files are sorted by path).
 */
export function nearestFile(
  model: MapModel,
  view: ViewTransform,
  sx: number,
  sy: number,
  radius: number = HIT_RADIUS_PX,
): number | null {
  let best: number | null = null;
  let bestDist = radius;
  for (let i = 0; i < model.files.length; i++) {
    const p = view.worldToScreen(model.files[i].x, model.files[i].y);
    const dist = Math.hypot(p.x - sx, p.y - sy);
    if (dist < bestDist) {
      best = i;
      bestDist = dist;
    }
  }
  return best;
}

/** Distance from a screen point to the segment a-b, for arrow hovering. */
export function segmentDistance(
  px: number,
  py: number,
  ax: number,
  ay: number,
  bx: number,
  by: number,
): number {
  const dx = bx - ax;
  const dy = by - ay;
  const lengthSq = dx * dx + dy * dy;
  if (lengthSq === 0) {
    return Math.hypot(px - ax, py - ay);
  }
  let t = ((px - ax) * dx + (py - ay) * dy) / lengthSq;
  t = Math.min(1, Math.max(0, t));
  return Math.hypot(px - (ax + t * dx), py - (ay + t * dy));
}
