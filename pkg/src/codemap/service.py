"""Local HTTP service: publishes the map model and answers overlay queries.

Read endpoints are lock-free against an immutable published result; the
anchor rebuild is serialized by a lock and swaps the published reference
atomically, so every request sees either the old or the new model in full.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import xref
from .model import MapModel
from .overlays import flow_layer, marker_layer
from .pipeline import BuildConfig, BuildResult, relayout_with_anchors

DEFAULT_PORT = 8077
_VIEWER_DIR = Path(__file__).parent / "viewer"
_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".json": "application/json; charset=utf-8",
    ".map": "application/json; charset=utf-8",
}


def config_from_model(model: MapModel, base: BuildConfig | None = None) -> BuildConfig:
    """Rebuild settings recorded at build time, so re-layouts stay consistent."""
    base = base or BuildConfig()
    meta = model.meta
    scan = meta.get("scan", {})
    return BuildConfig(
        include=tuple(scan.get("include", base.include)),
        exclude=tuple(scan.get("exclude", base.exclude)),
        languages=tuple(scan.get("languages", base.languages)),
        k=int(meta["k"]) if meta.get("k") else None,
        alpha=float(meta.get("alpha", base.alpha)),
        seed=int(meta.get("seed", base.seed)),
        resolution=model.grid.resolution,
        sigma0=float(meta["sigma0"]) if meta.get("sigma0") else None,
        sea_level=model.grid.sea_level,
        anchor_weight=base.anchor_weight,
        max_labels=base.max_labels,
    )


class MapService:
    """Holds the published build result and applies anchor re-layouts."""

    def __init__(self, result: BuildResult, config: BuildConfig, assets_dir: Path | None = None):
        self._published = result
        self._config = config
        self._rebuild_lock = threading.Lock()
        self.assets_dir = assets_dir or _VIEWER_DIR
        self._model_index = {f.path: i for i, f in enumerate(result.model.files)}

    @property
    def published(self) -> BuildResult:
        return self._published

    def model_index(self, path: str) -> int | None:
        return self._model_index.get(path)

    def search(self, query: str, mode: str) -> dict:
        snapshot = self._published
        hits = xref.search(query, snapshot.corpus, mode=mode)
        marker_hits = []
        paths = snapshot.corpus.paths
        for i, (count, _lines) in sorted(hits.hits.items()):
            model_i = self.model_index(paths[i])
            if model_i is not None:
                marker_hits.append({"fileIndex": model_i, "count": count})
        markers = marker_layer(marker_hits, tag=query)
        return {
            "search": hits.to_json_dict(paths),
            "markers": markers.to_json_dict(),
        }

    def callers(self, symbol: str, source_path: str | None = None) -> dict:
        """Flow tree of files using the symbol, rooted at the assumed definition site.

        The site is the hit file with the most occurrences unless a source
        path is given explicitly.
        """
        snapshot = self._published
        hits = xref.callers_of(symbol, snapshot.corpus)
        paths = snapshot.corpus.paths
        remapped = []
        for h in hits:
            model_i = self.model_index(paths[h["fileIndex"]])
            if model_i is not None:
                remapped.append({"fileIndex": model_i, "count": h["count"]})
        if not remapped:
            return {"kind": "flow", "symbol": symbol, "source": None, "nodes": [], "edges": [], "leaves": []}

        if source_path is not None and source_path in self._model_index:
            source = self._model_index[source_path]
        else:
            source = max(remapped, key=lambda h: (h["count"], -h["fileIndex"]))["fileIndex"]
        targets = [
            {"fileIndex": h["fileIndex"], "weight": h["count"]}
            for h in remapped
            if h["fileIndex"] != source
        ]
        if not targets:
            return {"kind": "flow", "symbol": symbol, "source": None, "nodes": [], "edges": [], "leaves": []}
        tree = flow_layer(source, targets, snapshot.model.layout())
        payload = tree.to_json_dict()
        payload["symbol"] = symbol
        payload["sourceFile"] = source
        return payload

    def file_content(self, path: str) -> str | None:
        snapshot = self._published
        for f in snapshot.corpus.files:
            if f.path == path:
                return f.content
        return None

    def apply_anchors(self, anchors: list[dict]) -> MapModel:
        """Soft-anchor matching files toward the given points and republish."""
        entries: dict[int, tuple[float, float]] = {}
        for anchor in anchors:
            prefix = anchor["pathPrefix"]
            x = float(anchor["x"])
            y = float(anchor["y"])
            for path, idx in self._model_index.items():
                if path.startswith(prefix):
                    entries[idx] = (x, y)
        with self._rebuild_lock:
            if entries:
                new_result = relayout_with_anchors(self._published, entries, self._config)
                self._model_index = {f.path: i for i, f in enumerate(new_result.model.files)}
                self._published = new_result
            return self._published.model


def _validate_anchor_body(body) -> str | None:
    if not isinstance(body, list) or not body:
        return "body must be a non-empty JSON array of anchors"
    for i, anchor in enumerate(body):
        if not isinstance(anchor, dict):
            return f"anchor {i} must be an object"
        if not isinstance(anchor.get("pathPrefix"), str) or not anchor["pathPrefix"]:
            return f"anchor {i} needs a non-empty string pathPrefix"
        for key in ("x", "y"):
            value = anchor.get(key)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                return f"anchor {i} needs numeric {key}"
            if not 0.0 <= float(value) <= 1.0:
                return f"anchor {i} {key} must lie in [0, 1]"
    return None


class _Handler(BaseHTTPRequestHandler):
    service: MapService  # set on the server class

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, content_type: str, payload: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, data) -> None:
        self._send(status, "application/json; charset=utf-8", json.dumps(data).encode("utf-8"))

    def do_GET(self):  # noqa: N802 (stdlib casing)
        parsed = urlparse(self.path)
        query = parse_qs(parsed.query)
        service = self.server.service  # type: ignore[attr-defined]

        if parsed.path == "/api/map":
            self._send_json(200, service.published.model.to_json_dict())
        elif parsed.path == "/api/search":
            q = query.get("q", [""])[0]
            mode = query.get("mode", ["plain"])[0]
            if not q:
                self._send_json(400, {"error": "missing query parameter q"})
                return
            if mode not in ("plain", "identifier"):
                self._send_json(400, {"error": "mode must be 'plain' or 'identifier'"})
                return
            self._send_json(200, service.search(q, mode))
        elif parsed.path == "/api/callers":
            symbol = query.get("symbol", [""])[0]
            if not symbol:
                self._send_json(400, {"error": "missing query parameter symbol"})
                return
            source = query.get("source", [None])[0]
            self._send_json(200, service.callers(symbol, source))
        elif parsed.path == "/api/file":
            path = query.get("path", [""])[0]
            content = service.file_content(path) if path else None
            if content is None:
                self._send_json(404, {"error": f"not a corpus member: {path}"})
                return
            self._send(200, "text/plain; charset=utf-8", content.encode("utf-8"))
        elif parsed.path.startswith("/api/"):
            self._send_json(404, {"error": f"unknown endpoint {parsed.path}"})
        else:
            self._serve_asset(parsed.path)

    def _serve_asset(self, path: str) -> None:
        service = self.server.service  # type: ignore[attr-defined]
        name = path.lstrip("/") or "index.html"
        base = service.assets_dir.resolve()
        target = (base / name).resolve()
        if not str(target).startswith(str(base)) or not target.is_file():
            self._send_json(404, {"error": f"no such asset: {path}"})
            return
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, ctype, target.read_bytes())

    def do_POST(self):  # noqa: N802
        parsed = urlparse(self.path)
        service = self.server.service  # type: ignore[attr-defined]
        if parsed.path != "/api/anchors":
            self._send_json(404, {"error": f"unknown endpoint {parsed.path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length).decode("utf-8")) if length else None
        except (ValueError, json.JSONDecodeError):
            self._send_json(400, {"error": "body must be valid JSON"})
            return
        problem = _validate_anchor_body(body)
        if problem is not None:
            self._send_json(400, {"error": problem})
            return
        model = service.apply_anchors(body)
        self._send_json(200, model.to_json_dict())


def make_server(service: MapService, port: int = DEFAULT_PORT, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.service = service  # type: ignore[attr-defined]
    return server
