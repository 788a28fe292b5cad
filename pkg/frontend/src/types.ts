// Wire types for the map service JSON endpoints.

export interface MapFile {
  path: string;
  x: number;
  y: number;
  loc: number;
}

export interface MapGrid {
  resolution: number;
  seaLevel: number;
  heights: number[]; // row-major, row 0 at the south edge
}

export interface MapLabel {
  text: string;
  x: number;
  y: number;
  fontSize: number; // in map widths
  kind: "filename" | "keyword";
  opacity?: number;
}

export interface MapModel {
  formatVersion: number;
  files: MapFile[];
  grid: MapGrid;
  labels: { labels: MapLabel[] };
  meta: Record<string, unknown>;
}

export interface SearchHit {
  fileIndex: number;
  path: string;
  count: number;
  lines: number[];
}

export interface Marker {
  fileIndex: number;
  magnitude: number; // sqrt of the hit count
  tag: string;
}

export interface SearchResponse {
  search: { query: string; mode: string; hits: SearchHit[] };
  markers: { kind: "markers"; markers: Marker[] };
}

export interface FlowNode {
  x: number;
  y: number;
  flow: number;
}

export interface FlowResponse {
  kind: "flow";
  source: [number, number] | null;
  nodes: FlowNode[];
  edges: [number, number][]; // [parent, child], node 0 is the root
  leaves: { node: number; file: number }[];
  symbol?: string;
  sourceFile?: number;
}

export interface AnchorRequest {
  pathPrefix: string;
  x: number;
  y: number;
}
