"""End-to-end map construction: corpus -> distances -> layout -> terrain -> labels."""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import cartography, corpus as corpus_mod, embedding, metrics, terrain, xref
from .corpus import Corpus, VectorSpace
from .embedding import AnchorSet, Layout
from .model import MapFile, MapModel


@dataclass(frozen=True)
class BuildConfig:
    include: tuple[str, ...] = corpus_mod.DEFAULT_INCLUDE
    exclude: tuple[str, ...] = corpus_mod.DEFAULT_EXCLUDE
    languages: tuple[str, ...] = corpus_mod.DEFAULT_LANGUAGES
    k: int | None = None  # neighbor count; None -> min(7, n-1)
    alpha: float = metrics.DEFAULT_ALPHA
    seed: int = 0
    resolution: int = terrain.DEFAULT_RESOLUTION
    sigma0: float | None = None  # None -> median hill width 0.02
    sea_level: float = terrain.DEFAULT_SEA_LEVEL
    margin: float = embedding.DEFAULT_MARGIN
    max_iter: int = embedding.DEFAULT_MAX_ITER
    eps_rel: float = embedding.DEFAULT_EPS_REL
    soft_weight: float = embedding.DEFAULT_SOFT_WEIGHT
    anchor_weight: float = 100.0  # user anchors need a stronger pull than warm starts
    max_labels: int = cartography.DEFAULT_MAX_LABELS


@dataclass(frozen=True)
class BuildResult:
    model: MapModel
    corpus: Corpus
    vectors: VectorSpace | None
    layout: Layout
    dissimilarity: metrics.DissimilarityMatrix | None


def _built_at(corpus: Corpus, root: Path) -> str:
    """Deterministic build stamp: SOURCE_DATE_EPOCH, else newest corpus file mtime.

    Wall-clock time would break the rebuild-twice byte-identity guarantee.
    """
    env = os.environ.get("SOURCE_DATE_EPOCH")
    if env is not None:
        stamp = int(env)
    else:
        stamp = 0
        for f in corpus.files:
            try:
                stamp = max(stamp, int((root / f.path).stat().st_mtime))
            except OSError:
                continue
    return datetime.fromtimestamp(stamp, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def blended_distances(
    corpus: Corpus, vectors: VectorSpace, alpha: float
) -> metrics.DissimilarityMatrix:
    lex = metrics.lexical_dissimilarity(vectors)
    graph = xref.extract_references(corpus)
    struct = metrics.reference_distance(graph.undirected(), lex.labels)
    return metrics.blend(lex, struct, alpha)


def compute_layout(
    d: metrics.DissimilarityMatrix,
    config: BuildConfig,
    prev_positions: dict[str, tuple[float, float]] | None = None,
) -> tuple[Layout, bool, int]:
    """Fresh or warm layout; returns (layout, fresh_fallback flag, effective k)."""
    n = d.n
    k = config.k if config.k is not None else min(7, max(n - 1, 1))
    if prev_positions is not None:
        layout, fallback = embedding.incremental_layout(
            prev_positions,
            d,
            soft_weight=config.soft_weight,
            k=k,
            max_iter=config.max_iter,
            eps_rel=config.eps_rel,
            seed=config.seed,
            margin=config.margin,
        )
        return layout, fallback, k
    layout = embedding.embed(
        d, k=k, max_iter=config.max_iter, eps_rel=config.eps_rel, seed=config.seed, margin=config.margin
    )
    return layout, False, k


def assemble_model(
    corpus: Corpus,
    vectors: VectorSpace | None,
    layout: Layout,
    config: BuildConfig,
    meta_extra: dict | None = None,
    root: Path | None = None,
) -> MapModel:
    locs = np.array([f.loc for f in corpus.files], dtype=np.float64)
    grid, sigma0 = terrain.build_elevation(
        layout, locs, resolution=config.resolution, sigma0=config.sigma0, sea_level=config.sea_level
    )

    keywords: list[dict] = []
    if vectors is not None and len(corpus.files) > 0:
        keywords = cartography.region_keywords(grid, layout, vectors)
    label_files = [
        {"basename": f.basename, "loc": f.loc, "x": float(x), "y": float(y)}
        for f, (x, y) in zip(corpus.files, layout.positions)
    ]
    labels = cartography.place_labels(label_files, keywords, max_labels=config.max_labels)

    meta = {
        "k": config.k if config.k is not None else 0,
        "alpha": config.alpha,
        "seed": config.seed,
        "sigma0": round(float(sigma0), 9),
        "builtAt": _built_at(corpus, root) if root is not None else "1970-01-01T00:00:00Z",
        "root": str(root) if root is not None else "",
        "scan": {
            "include": list(config.include),
            "exclude": list(config.exclude),
            "languages": list(config.languages),
        },
    }
    if meta_extra:
        meta.update(meta_extra)

    files = tuple(
        MapFile(path=f.path, x=float(x), y=float(y), loc=f.loc)
        for f, (x, y) in zip(corpus.files, layout.positions)
    )
    return MapModel(files=files, grid=grid, labels=labels, meta=meta)


def build_map(
    root: str | Path,
    config: BuildConfig = BuildConfig(),
    prev_model: MapModel | None = None,
) -> BuildResult:
    """Run the whole construction pipeline over a source tree."""
    root = Path(root)
    scanned = corpus_mod.scan_tree(
        root, include=config.include, exclude=config.exclude, languages=config.languages
    )
    n = len(scanned.files)

    if n == 0:
        layout = Layout(positions=np.zeros((0, 2)), seed=config.seed)
        model = assemble_model(scanned, None, layout, config, meta_extra={"k": 0}, root=root)
        return BuildResult(model=model, corpus=scanned, vectors=None, layout=layout, dissimilarity=None)

    vectors = corpus_mod.build_vectors(scanned)
    d = blended_distances(scanned, vectors, config.alpha)

    prev_positions = None
    extra: dict = {}
    if prev_model is not None:
        prev_positions = prev_model.positions_by_path()
    layout, fallback, k = compute_layout(d, config, prev_positions)
    extra["k"] = k
    if prev_model is not None:
        extra["warmStart"] = True
        if fallback:
            extra["freshFallback"] = True

    model = assemble_model(scanned, vectors, layout, config, meta_extra=extra, root=root)
    return BuildResult(model=model, corpus=scanned, vectors=vectors, layout=layout, dissimilarity=d)


def relayout_with_anchors(
    result: BuildResult, anchor_entries: dict[int, tuple[float, float]], config: BuildConfig
) -> BuildResult:
    """Re-run SMACOF from the current layout with user-defined soft anchors.

    The bounding box is not re-fit afterwards (that would drag files away
    from the coordinates the user just chose); positions are clamped into the
    unit square instead.
    """
    if result.dissimilarity is None:
        return result
    d = result.dissimilarity
    init = result.layout.positions
    anchors = AnchorSet(entries=anchor_entries, mode="soft", soft_weight=config.anchor_weight)
    scaled = embedding._rescale_to_configuration(d, init)
    refined = embedding.smacof(
        scaled,
        Layout(positions=init, seed=config.seed),
        anchors=anchors,
        max_iter=config.max_iter,
        eps_rel=config.eps_rel,
    )
    clamped = np.clip(refined.positions, 0.0, 1.0)
    layout = Layout(positions=clamped, stress_trace=refined.stress_trace, seed=config.seed)

    root = Path(result.model.meta.get("root", "."))
    extra = {"k": result.model.meta.get("k", 0), "anchored": True}
    model = assemble_model(result.corpus, result.vectors, layout, config, meta_extra=extra, root=root)
    return BuildResult(
        model=model,
        corpus=result.corpus,
        vectors=result.vectors,
        layout=layout,
        dissimilarity=result.dissimilarity,
    )
