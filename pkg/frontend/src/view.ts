// Pan/zoom view state: world is the unit square (y up), screen is canvas pixels.

export const MIN_ZOOM = 1;
export const MAX_ZOOM = 32;

function clamp(value: number, min: number, max: number): number {
  return Math.min(max, Math.max(min, value));
}

export class ViewTransform {
  zoom = 1;
  panX = 0;
  panY = 0;

  constructor(public width: number, public height: number) {}

  worldToScreen(wx: number, wy: number): { x: number; y: number } {
    return {
      x: wx * this.width * this.zoom + this.panX,
      y: (1 - wy) * this.height * this.zoom + this.panY,
    };
  }

  screenToWorld(sx: number, sy: number): { x: number; y: number } {
    return {
      x: (sx - this.panX) / (this.width * this.zoom),
      y: 1 - (sy - this.panY) / (this.height * this.zoom),
    };
  }

  /** Rescale about a screen point; that point keeps its screen position. */
  zoomAt(sx: number, sy: number, factor: number): void {
    const next = clamp(this.zoom * factor, MIN_ZOOM, MAX_ZOOM);
    const ratio = next / this.zoom;
    this.panX = sx - (sx - this.panX) * ratio;
    this.panY = sy - (sy - this.panY) * ratio;
    this.zoom = next;
    this.clampPan();
  }

  panBy(dx: number, dy: number): void {
    this.panX += dx;
    this.panY += dy;
    this.clampPan();
  }

  /** Centers a world point in the viewport (used when jumping to a result). */
  centerOn(wx: number, wy: number): void {
    this.panX = this.width / 2 - wx * this.width * this.zoom;
    this.panY = this.height / 2 - (1 - wy) * this.height * this.zoom;
    this.clampPan();
  }

  reset(): void {
    this.zoom = 1;
    this.panX = 0;
    this.panY = 0;
  }

  /** The map always covers the viewport (zoom >= 1 guarantees it can). */
  private clampPan(): void {
    this.panX = clamp(this.panX, this.width - this.width * this.zoom, 0);
    this.panY = clamp(this.panY, this.height - this.height * this.zoom, 0);
  }
}
