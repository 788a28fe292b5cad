// Typed client for the map service; superseded requests are aborted
// (at most one in flight per endpoint kind, latest wins).

import type { AnchorRequest, FlowResponse, MapModel, SearchResponse } from "./types.js";

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(public base: string = "") {}

  private async fetchJson<T>(kind: string, path: string): Promise<T> {
    this.controllers.get(kind)?.abort();
    const controller = new AbortController();
    this.controllers.set(kind, controller);
    const response = await fetch(this.base + path, { signal: controller.signal });
    if (!response.ok) {
      throw new Error(`${path}: HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  getMap(): Promise<MapModel> {
    return this.fetchJson<MapModel>("map", "/api/map");
  }

  search(query: string, mode: "plain" | "identifier" = "plain"): Promise<SearchResponse> {
    const q = encodeURIComponent(query);
    return this.fetchJson<SearchResponse>("search", `/api/search?q=${q}&mode=${mode}`);
  }

  callers(symbol: string): Promise<FlowResponse> {
    const s = encodeURIComponent(symbol);
    return this.fetchJson<FlowResponse>("callers", `/api/callers?symbol=${s}`);
  }

  async fileContent(path: string): Promise<string> {
    const response = await fetch(`${this.base}/api/file?path=${encodeURIComponent(path)}`);
    if (!response.ok) {
      throw new Error(`file ${path}: HTTP ${response.status}`);
    }
    return response.text();
  }

  async postAnchors(anchors: AnchorRequest[]): Promise<MapModel> {
    const response = await fetch(`${this.base}/api/anchors`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(anchors),
    });
    if (!response.ok) {
      throw new Error(`anchors: HTTP ${response.status}`);
    }
    return (await response.json()) as MapModel;
  }
}
