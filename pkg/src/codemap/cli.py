"""Command line entry points: build, render, diff, serve."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .corpus import CorpusError, scan_tree, build_vectors
from .metrics import DissimilarityMatrix
from .model import MapModel, layout_json_dict
from .overlays import heat_layer, flow_layer, marker_layer
from .pipeline import BuildConfig, BuildResult, blended_distances, build_map
from .render import Palette, RenderOptions, render_svg
from .service import DEFAULT_PORT, MapService, config_from_model, make_server
from . import xref

OVERLAY_FORMS = "search:<query>  callers:<symbol>  heat:<csvfile>"


def _build_config_from_args(args) -> BuildConfig:
    kwargs = {}
    if args.include:
        kwargs["include"] = tuple(args.include)
    if args.exclude:
        kwargs["exclude"] = tuple(args.exclude)
    if args.language is not None:
        kwargs["languages"] = tuple(args.language)
    if args.k is not None:
        kwargs["k"] = args.k
    if args.alpha is not None:
        kwargs["alpha"] = args.alpha
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.resolution is not None:
        kwargs["resolution"] = args.resolution
    if args.sigma0 is not None:
        kwargs["sigma0"] = args.sigma0
    if args.sea_level is not None:
        kwargs["sea_level"] = args.sea_level
    if args.max_labels is not None:
        kwargs["max_labels"] = args.max_labels
    return BuildConfig(**kwargs)


def cmd_build(args) -> int:
    config = _build_config_from_args(args)
    prev = None
    if args.prev:
        prev = MapModel.load(args.prev)
    try:
        result = build_map(args.root, config, prev_model=prev)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not result.model.files:
        print("warning: corpus is empty; writing a degenerate model", file=sys.stderr)
    for warning in result.corpus.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    result.model.save(args.output)
    if args.dump_layout:
        payload = layout_json_dict(
            result.layout,
            result.model.paths,
            {
                "k": result.model.meta.get("k"),
                "alpha": config.alpha,
                "softWeight": config.soft_weight,
                "seed": config.seed,
            },
        )
        with open(args.dump_layout, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)
    if args.dump_distances and result.dissimilarity is not None:
        with open(args.dump_distances, "w", encoding="utf-8") as fh:
            json.dump(result.dissimilarity.to_json_dict(), fh, sort_keys=True)
    print(f"wrote {args.output} ({len(result.model.files)} files)")
    return 0


def _load_service_result(model_path: str, root: str | None) -> tuple[BuildResult, BuildConfig]:
    """Reconstruct a servable build result from a model file plus the source tree."""
    model = MapModel.load(model_path)
    config = config_from_model(model)
    root_dir = Path(root) if root else Path(model.meta.get("root", "."))
    scanned = scan_tree(
        root_dir, include=config.include, exclude=config.exclude, languages=config.languages
    )
    vectors = None
    dissimilarity: DissimilarityMatrix | None = None
    if scanned.paths == model.paths and scanned.files:
        vectors = build_vectors(scanned)
        dissimilarity = blended_distances(scanned, vectors, config.alpha)
    elif scanned.paths != model.paths:
        print(
            "warning: source tree no longer matches the model; anchor re-layout disabled",
            file=sys.stderr,
        )
    result = BuildResult(
        model=model,
        corpus=scanned,
        vectors=vectors,
        layout=model.layout(),
        dissimilarity=dissimilarity,
    )
    return result, config


def _resolve_overlays(specs: list[str], result: BuildResult) -> list:
    overlays: list = []
    index_of = {path: i for i, path in enumerate(result.model.paths)}
    corpus_paths = result.corpus.paths
    for spec in specs:
        kind, _, arg = spec.partition(":")
        if not arg or kind not in ("search", "callers", "heat"):
            raise ValueError(f"malformed overlay spec {spec!r}; valid forms: {OVERLAY_FORMS}")
        if kind == "search":
            hits = xref.search(arg, result.corpus, mode="plain")
            marker_hits = []
            for i, (count, _lines) in sorted(hits.hits.items()):
                model_i = index_of.get(corpus_paths[i])
                if model_i is not None:
                    marker_hits.append({"fileIndex": model_i, "count": count})
            if marker_hits:
                overlays.append(marker_layer(marker_hits, tag=arg))
            else:
                overlays.append({"kind": "annotation", "text": f"no results: {arg}"})
        elif kind == "callers":
            hits = xref.callers_of(arg, result.corpus)
            remapped = [
                {"fileIndex": index_of[corpus_paths[h["fileIndex"]]], "count": h["count"]}
                for h in hits
                if corpus_paths[h["fileIndex"]] in index_of
            ]
            if len(remapped) < 2:
                overlays.append({"kind": "annotation", "text": f"no callers: {arg}"})
                continue
            source = max(remapped, key=lambda h: (h["count"], -h["fileIndex"]))["fileIndex"]
            targets = [
                {"fileIndex": h["fileIndex"], "weight": h["count"]}
                for h in remapped
                if h["fileIndex"] != source
            ]
            overlays.append(flow_layer(source, targets, result.model.layout()))
        else:  # heat
            values = {f.path: 0.0 for f in result.model.files}
            with open(arg, newline="", encoding="utf-8") as fh:
                for row in csv.reader(fh):
                    if len(row) >= 2 and row[0] in values:
                        values[row[0]] = float(row[1])
            overlays.append(heat_layer([values[f.path] for f in result.model.files]))
    return overlays


def cmd_render(args) -> int:
    try:
        result, _config = _load_service_result(args.model, args.root)
    except (OSError, ValueError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        overlays = _resolve_overlays(args.overlay or [], result)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    palette = Palette()
    if args.palette:
        with open(args.palette, encoding="utf-8") as fh:
            palette = Palette.from_json_dict(json.load(fh))
    options = RenderOptions(
        size=args.size,
        palette=palette,
        contour_interval=args.contour_interval,
        light_azimuth=args.light_azimuth,
        light_altitude=args.light_altitude,
    )
    svg = render_svg(result.model, overlays, options)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    print(f"wrote {args.output}")
    return 0


def diff_report(old: MapModel, new: MapModel) -> dict:
    old_pos = old.positions_by_path()
    new_pos = new.positions_by_path()
    shared = sorted(set(old_pos) & set(new_pos))
    added = sorted(set(new_pos) - set(old_pos))
    removed = sorted(set(old_pos) - set(new_pos))
    rows = []
    for path in shared:
        ox, oy = old_pos[path]
        nx, ny = new_pos[path]
        rows.append({"path": path, "displacement": ((nx - ox) ** 2 + (ny - oy) ** 2) ** 0.5})
    report = {
        "comparable": bool(shared),
        "shared": len(shared),
        "added": len(added),
        "removed": len(removed),
        "meanDisplacement": sum(r["displacement"] for r in rows) / len(rows) if rows else 0.0,
        "maxDisplacement": max((r["displacement"] for r in rows), default=0.0),
        "files": rows,
    }
    return report


def cmd_diff(args) -> int:
    old = MapModel.load(args.old)
    new = MapModel.load(args.new)
    report = diff_report(old, new)
    if args.json:
        print(json.dumps(report, sort_keys=True))
        return 0
    if not report["comparable"]:
        print("models share no files; layouts are not comparable")
        return 0
    print(f"{'file':<48} {'displacement':>12}")
    for row in report["files"]:
        print(f"{row['path']:<48} {row['displacement']:>12.6f}")
    print(
        f"shared={report['shared']} added={report['added']} removed={report['removed']} "
        f"mean={report['meanDisplacement']:.6f} max={report['maxDisplacement']:.6f}"
    )
    return 0


def cmd_serve(args) -> int:
    try:
        result, config = _load_service_result(args.model, args.root)
    except (OSError, ValueError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    assets = Path(args.assets) if args.assets else None
    service = MapService(result, config, assets_dir=assets)
    server = make_server(service, port=args.port, host=args.host)
    host, port = server.server_address[:2]
    print(f"serving map on http://{host}:{port}/ (Ctrl-C to stop)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codemap", description="Cartographic software maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a map model from a source tree")
    p_build.add_argument("root")
    p_build.add_argument("-o", "--output", required=True)
    p_build.add_argument("--prev", help="previous model for a stable warm re-layout")
    p_build.add_argument("--include", action="append", help="glob to include (repeatable)")
    p_build.add_argument("--exclude", action="append", help="glob to exclude (repeatable)")
    p_build.add_argument("--language", action="append", help="keyword stoplists to apply")
    p_build.add_argument("--k", type=int, help="neighbor count (default min(7, n-1))")
    p_build.add_argument("--alpha", type=float, help="structural blend weight (default 0.6)")
    p_build.add_argument("--seed", type=int, help="seed for randomized fallbacks (default 0)")
    p_build.add_argument("--resolution", type=int, help="elevation grid side (default 512)")
    p_build.add_argument("--sigma0", type=float, help="hill width factor (default: auto)")
    p_build.add_argument("--sea-level", type=float, dest="sea_level")
    p_build.add_argument("--max-labels", type=int, dest="max_labels")
    p_build.add_argument("--dump-layout", help="also write the layout debug JSON here")
    p_build.add_argument("--dump-distances", help="also write the blended distance matrix here")
    p_build.set_defaults(fn=cmd_build)

    p_render = sub.add_parser("render", help="render a model (plus overlays) to SVG")
    p_render.add_argument("model")
    p_render.add_argument("-o", "--output", required=True)
    p_render.add_argument("--overlay", action="append", help=f"overlay spec: {OVERLAY_FORMS}")
    p_render.add_argument("--root", help="source tree (default: recorded in the model)")
    p_render.add_argument("--size", type=int, default=1024)
    p_render.add_argument("--palette", help="palette JSON file")
    p_render.add_argument("--contour-interval", type=float, default=0.1, dest="contour_interval")
    p_render.add_argument("--light-azimuth", type=float, default=315.0, dest="light_azimuth")
    p_render.add_argument("--light-altitude", type=float, default=45.0, dest="light_altitude")
    p_render.set_defaults(fn=cmd_render)

    p_diff = sub.add_parser("diff", help="compare two models' layouts")
    p_diff.add_argument("old")
    p_diff.add_argument("new")
    p_diff.add_argument("--json", action="store_true")
    p_diff.set_defaults(fn=cmd_diff)

    p_serve = sub.add_parser("serve", help="serve the map and overlay queries over HTTP")
    p_serve.add_argument("model")
    p_serve.add_argument("--root", help="source tree (default: recorded in the model)")
    p_serve.add_argument("--port", type=int, default=DEFAULT_PORT)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--assets", help="viewer asset directory (default: bundled page)")
    p_serve.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
