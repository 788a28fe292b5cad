// Interaction logic, kept free of direct DOM access so it is fully scriptable:
// main.ts binds browser events to these methods, tests call them directly.

import { ApiClient } from "./api.js";
import { HIT_RADIUS_PX, nearestFile, segmentDistance } from "./hit.js";
import {
  buildTerrainImage,
  computeContours,
  drawScene,
  emptyLayers,
  type DrawContext,
  type SceneLayers,
} from "./scene.js";
import type { MapModel, SearchHit } from "./types.js";
import { ViewTransform } from "./view.js";

export interface ViewerEvents {
  onStatus(text: string): void; // result counters, notices
  onError(message: string | null): void; // error banner (null clears it)
  onHits(hits: SearchHit[]): void; // sorted result list for the sidebar
  onFileOpened(path: string, content: string): void;
  onModelLoaded(model: MapModel): void;
  onArrowHover(paths: string[] | null): void;
}

const ZOOM_PER_WHEEL = 1.0015; // factor per wheel delta unit

export class ViewerController {
  model: MapModel | null = null;
  view: ViewTransform;
  layers: SceneLayers = emptyLayers();
  selectedPath: string | null = null;
  lastQuery = "";
  anchorMode = false;

  constructor(
    private api: ApiClient,
    private ctx: DrawContext,
    width: number,
    height: number,
    private events: ViewerEvents,
  ) {
    this.view = new ViewTransform(width, height);
  }

  async load(): Promise<void> {
    try {
      const model = await this.api.getMap();
      this.adoptModel(model);
      this.events.onError(null);
    } catch (err) {
      this.events.onError(`map service unreachable: ${String(err)}`);
    }
  }

  /** Rebuilds every model-derived layer; overlays are cleared (stateless). */
  private adoptModel(model: MapModel): void {
    this.model = model;
    this.layers = emptyLayers();
    this.layers.terrain = buildTerrainImage(model.grid);
    this.layers.contours = computeContours(model.grid);
    this.selectedPath = null;
    this.events.onModelLoaded(model);
    this.draw();
  }

  draw(): void {
    if (!this.model) {
      return;
    }
    this.layers.selected = this.selectedIndex();
    drawScene(this.ctx, this.model, this.view, this.layers);
  }

  private selectedIndex(): number | null {
    if (this.model === null || this.selectedPath === null) {
      return null;
    }
    const idx = this.model.files.findIndex((f) => f.path === this.selectedPath);
    return idx >= 0 ? idx : null;
  }

  wheel(sx: number, sy: number, deltaY: number): void {
    this.view.zoomAt(sx, sy, Math.pow(ZOOM_PER_WHEEL, -deltaY));
    this.draw();
  }

  pan(dx: number, dy: number): void {
    this.view.panBy(dx, dy);
    this.draw();
  }

  async search(query: string): Promise<void> {
    if (!this.model) {
      return;
    }
    if (!query) {
      return; // empty query is a no-op
    }
    this.lastQuery = query;
    try {
      const response = await this.api.search(query);
      this.layers.markers = response.markers.markers;
      const hits = [...response.search.hits].sort((a, b) => b.count - a.count);
      this.events.onHits(hits);
      this.events.onStatus(
        hits.length === 0 ? `0 results for "${query}"` : `${hits.length} files match "${query}"`,
      );
      this.events.onError(null);
      this.draw();
    } catch (err) {
      if ((err as Error).name !== "AbortError") {
        this.events.onError(String(err));
      }
    }
  }

  /** Clicking a result row pans the map to that file's marker. */
  focusFile(path: string): void {
    const file = this.model?.files.find((f) => f.path === path);
    if (!file) {
      return;
    }
    this.view.centerOn(file.x, file.y);
    this.draw();
  }

  async doubleClick(sx: number, sy: number): Promise<string | null> {
    if (!this.model) {
      return null;
    }
    const index = nearestFile(this.model, this.view, sx, sy, HIT_RADIUS_PX);
    if (index === null) {
      return null; // water or nothing nearby
    }
    const path = this.model.files[index].path;
    try {
      const content = await this.api.fileContent(path);
      this.selectedPath = path;
      this.events.onFileOpened(path, content);
      this.draw();
      return path;
    } catch (err) {
      this.events.onError(String(err));
      return null;
    }
  }

  async showCallers(symbol: string): Promise<void> {
    if (!this.model) {
      return;
    }
    if (!symbol) {
      this.layers.flow = null;
      this.draw();
      return;
    }
    try {
      const flow = await this.api.callers(symbol);
      if (flow.nodes.length === 0) {
        this.layers.flow = null;
        this.events.onStatus(`no callers for "${symbol}"`);
      } else {
        this.layers.flow = flow;
        this.events.onStatus(`${flow.leaves.length} merged call sites for "${symbol}"`);
      }
      this.draw();
    } catch (err) {
      if ((err as Error).name !== "AbortError") {
        this.events.onError(String(err));
      }
    }
  }

  clearCallers(): void {
    this.layers.flow = null;
    this.draw();
  }

  /** Files reached through the hovered arrow, for the tooltip. */
  hover(sx: number, sy: number): void {
    const flow = this.layers.flow;
    if (!flow || !this.model) {
      return;
    }
    let hoverEdge: [number, number] | null = null;
    for (const [parent, child] of flow.edges) {
      const a = this.view.worldToScreen(flow.nodes[parent].x, flow.nodes[parent].y);
      const b = this.view.worldToScreen(flow.nodes[child].x, flow.nodes[child].y);
      if (segmentDistance(sx, sy, a.x, a.y, b.x, b.y) < 6) {
        hoverEdge = [parent, child];
        break;
      }
    }
    if (!hoverEdge) {
      this.events.onArrowHover(null);
      return;
    }
    const children = new Map<number, number[]>();
    for (const [p, c] of flow.edges) {
      const kids = children.get(p);
      if (kids) {
        kids.push(c);
      } else {
        children.set(p, [c]);
      }
    }
    const leafFile = new Map(flow.leaves.map((l) => [l.node, l.file]));
    const reached: string[] = [];
    const stack = [hoverEdge[1]];
    while (stack.length > 0) {
      const node = stack.pop()!;
      const file = leafFile.get(node);
      if (file !== undefined && this.model.files[file]) {
        reached.push(this.model.files[file].path);
      }
      stack.push(...(children.get(node) ?? []));
    }
    this.events.onArrowHover(reached.sort());
  }

  async placeAnchor(sx: number, sy: number, pathPrefix: string): Promise<void> {
    if (!this.anchorMode || !pathPrefix || !this.model) {
      return;
    }
    const world = this.view.screenToWorld(sx, sy);
    const x = Math.min(1, Math.max(0, world.x));
    const y = Math.min(1, Math.max(0, world.y));
    try {
      const model = await this.api.postAnchors([{ pathPrefix, x, y }]);
      this.adoptModel(model);
      this.events.onStatus(`anchored "${pathPrefix}" at (${x.toFixed(2)}, ${y.toFixed(2)})`);
    } catch (err) {
      this.events.onError(String(err));
    }
  }
}
