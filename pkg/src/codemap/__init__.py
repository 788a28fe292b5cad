"""codemap: cartographic software maps with a stable layout and thematic overlays."""

from .corpus import Corpus, SourceFile, build_vectors, scan_tree, tokenize
from .embedding import AnchorSet, Layout, classical_mds, embed, incremental_layout, knn_graph, smacof
from .metrics import DissimilarityMatrix, blend, lexical_dissimilarity, reference_distance
from .model import MapModel
from .overlays import FlowTree, HeatLayer, MarkerLayer, flow_layer, heat_layer, marker_layer
from .pipeline import BuildConfig, build_map
from .render import render_svg
from .terrain import ElevationGrid, build_elevation, sea_mask
from .xref import XrefGraph, callers_of, extract_references, search

__version__ = "0.1.0"

__all__ = [
    "AnchorSet",
    "BuildConfig",
    "Corpus",
    "DissimilarityMatrix",
    "ElevationGrid",
    "FlowTree",
    "HeatLayer",
    "Layout",
    "MapModel",
    "MarkerLayer",
    "SourceFile",
    "XrefGraph",
    "blend",
    "build_elevation",
    "build_map",
    "build_vectors",
    "callers_of",
    "classical_mds",
    "embed",
    "extract_references",
    "flow_layer",
    "heat_layer",
    "incremental_layout",
    "knn_graph",
    "lexical_dissimilarity",
    "marker_layer",
    "reference_distance",
    "render_svg",
    "scan_tree",
    "sea_mask",
    "search",
    "smacof",
    "tokenize",
]
