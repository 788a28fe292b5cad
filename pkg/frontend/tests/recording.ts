// Canvas 2D stub that records draw calls instead of rasterizing.

import type { DrawContext } from "../src/scene.js";

export interface TextCall {
  text: string;
  x: number;
  y: number;
  font: string;
}

export interface ArcCall {
  x: number;
  y: number;
  r: number;
  fillStyle: string;
  filled: boolean;
}

export class RecordingContext implements DrawContext {
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 1;
  globalAlpha = 1;
  font = "";
  textAlign: CanvasTextAlign = "left";

  fillRects: Array<{ x: number; y: number; w: number; h: number; fillStyle: string }> = [];
  texts: TextCall[] = [];
  arcs: ArcCall[] = [];
  strokes: Array<{ strokeStyle: string; lineWidth: number; points: number }> = [];
  images = 0;

  private pathPoints = 0;
  private pendingArc: ArcCall | null = null;

  fillRect(x: number, y: number, w: number, h: number): void {
    this.fillRects.push({ x, y, w, h, fillStyle: String(this.fillStyle) });
  }

  beginPath(): void {
    this.pathPoints = 0;
    this.pendingArc = null;
  }

  moveTo(): void {
    this.pathPoints += 1;
  }

  lineTo(): void {
    this.pathPoints += 1;
  }

  arc(x: number, y: number, r: number): void {
    this.pendingArc = { x, y, r, fillStyle: String(this.fillStyle), filled: false };
  }

  closePath(): void {}

  fill(): void {
    if (this.pendingArc) {
      this.pendingArc.filled = true;
      this.pendingArc.fillStyle = String(this.fillStyle);
      this.arcs.push(this.pendingArc);
      this.pendingArc = null;
    }
  }

  stroke(): void {
    this.strokes.push({
      strokeStyle: String(this.strokeStyle),
      lineWidth: this.lineWidth,
      points: this.pathPoints,
    });
    this.pathPoints = 0;
  }

  fillText(text: string, x: number, y: number): void {
    this.texts.push({ text, x, y, font: this.font });
  }

  drawImage(): void {
    this.images += 1;
  }

  reset(): void {
    this.fillRects = [];
    this.texts = [];
    this.arcs = [];
    this.strokes = [];
    this.images = 0;
  }
}
