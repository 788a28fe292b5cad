"""The published map artifact and its JSON form (format version 1)."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cartography import Label, LabelSet
from .embedding import Layout
from .terrain import ElevationGrid

FORMAT_VERSION = 1


def round6(value: float) -> float:
    """Coordinates and heights are published at 6-decimal fixed precision."""
    return round(float(value), 6)


@dataclass(frozen=True)
class MapFile:
    path: str
    x: float
    y: float
    loc: int


@dataclass(frozen=True)
class MapModel:
    files: tuple[MapFile, ...]
    grid: ElevationGrid
    labels: LabelSet
    meta: dict

    @property
    def paths(self) -> list[str]:
        return [f.path for f in self.files]

    def layout(self) -> Layout:
        pos = np.array([[f.x, f.y] for f in self.files], dtype=np.float64).reshape(-1, 2)
        return Layout(positions=pos, seed=int(self.meta.get("seed", 0)))

    def positions_by_path(self) -> dict[str, tuple[float, float]]:
        return {f.path: (f.x, f.y) for f in self.files}

    def to_json_dict(self) -> dict:
        return {
            "formatVersion": FORMAT_VERSION,
            "files": [
                {"path": f.path, "x": round6(f.x), "y": round6(f.y), "loc": f.loc}
                for f in self.files
            ],
            "grid": {
                "resolution": self.grid.resolution,
                "seaLevel": round6(self.grid.sea_level),
                "heights": [round6(h) for h in self.grid.heights.ravel()],
            },
            "labels": {
                "labels": [
                    {
                        "text": lb.text,
                        "x": round6(lb.x),
                        "y": round6(lb.y),
                        "fontSize": round6(lb.font_size),
                        "kind": lb.kind,
                        "opacity": round6(lb.opacity),
                    }
                    for lb in self.labels.labels
                ]
            },
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "MapModel":
        if data.get("formatVersion") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format version: {data.get('formatVersion')}")
        files = tuple(
            MapFile(path=f["path"], x=float(f["x"]), y=float(f["y"]), loc=int(f["loc"]))
            for f in data["files"]
        )
        g = data["grid"]
        res = int(g["resolution"])
        heights = np.asarray(g["heights"], dtype=np.float64).reshape(res, res)
        grid = ElevationGrid(resolution=res, heights=heights, sea_level=float(g["seaLevel"]))
        labels = LabelSet(
            labels=tuple(
                Label(
                    text=lb["text"],
                    x=float(lb["x"]),
                    y=float(lb["y"]),
                    font_size=float(lb["fontSize"]),
                    kind=lb["kind"],
                    opacity=float(lb.get("opacity", 1.0)),
                )
                for lb in data["labels"]["labels"]
            )
        )
        return cls(files=files, grid=grid, labels=labels, meta=dict(data["meta"]))

    @classmethod
    def load(cls, path: str) -> "MapModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())


def layout_json_dict(layout: Layout, paths: list[str], meta: dict) -> dict:
    """Debug serialization of a layout: positions, stress trace, and settings."""
    return {
        "positions": [
            {"path": p, "x": round6(x), "y": round6(y)}
            for p, (x, y) in zip(paths, layout.positions)
        ],
        "stress": [float(s) for s in layout.stress_trace],
        "meta": meta,
    }
