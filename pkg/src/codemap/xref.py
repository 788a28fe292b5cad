"""Lexical cross-references (approximate call graph) and full-text search."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .corpus import Corpus

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_IDENT_CHARS = re.compile(r"[A-Za-z0-9_]")


@dataclass(frozen=True)
class XrefGraph:
    """Directed file references: A -> B when A mentions B's basename."""

    n: int
    edges: dict[int, dict[int, int]]  # source -> {target: occurrence count}

    def __post_init__(self):
        for a, targets in self.edges.items():
            if a in targets:
                raise ValueError("reference graph must not contain self-edges")
            for w in targets.values():
                if w < 1:
                    raise ValueError("reference weights must be >= 1")

    def undirected(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for a, targets in self.edges.items():
            for b in targets:
                out.setdefault(a, set()).add(b)
                out.setdefault(b, set()).add(a)
        return out


@dataclass(frozen=True)
class SearchHits:
    query: str
    mode: str
    hits: dict[int, tuple[int, tuple[int, ...]]]  # file index -> (count, 1-based lines)

    def to_json_dict(self, paths: list[str]) -> dict:
        return {
            "query": self.query,
            "mode": self.mode,
            "hits": [
                {
                    "fileIndex": i,
                    "path": paths[i],
                    "count": count,
                    "lines": list(lines),
                }
                for i, (count, lines) in sorted(self.hits.items())
            ],
        }


def _identifier_counts(content: str) -> Counter:
    return Counter(_IDENT_RE.findall(content))


def count_identifier(content: str, symbol: str) -> int:
    """Occurrences of symbol as a whole identifier (not part of a longer one)."""
    if _IDENT_RE.fullmatch(symbol):
        return _identifier_counts(content)[symbol]
    # Non-identifier symbols fall back to a delimiter scan.
    count = 0
    start = 0
    while True:
        at = content.find(symbol, start)
        if at < 0:
            return count
        before = content[at - 1] if at > 0 else ""
        after_idx = at + len(symbol)
        after = content[after_idx] if after_idx < len(content) else ""
        if not _IDENT_CHARS.fullmatch(before or " ") and not _IDENT_CHARS.fullmatch(after or " "):
            count += 1
        start = at + 1


def extract_references(corpus: Corpus) -> XrefGraph:
    """Edge A -> B weighted by how often A's text uses B's basename as an identifier.

    Basenames shared by several files link to all of them; a file mentioning
    only its own name produces no edge.
    """
    n = len(corpus.files)
    by_basename: dict[str, list[int]] = {}
    for i, f in enumerate(corpus.files):
        by_basename.setdefault(f.basename, []).append(i)

    edges: dict[int, dict[int, int]] = {}
    for a, f in enumerate(corpus.files):
        ident_counts = _identifier_counts(f.content)
        for basename, owners in by_basename.items():
            count = ident_counts.get(basename, 0)
            if count < 1:
                continue
            for b in owners:
                if b != a:
                    edges.setdefault(a, {})[b] = count
    return XrefGraph(n=n, edges=edges)


def callers_of(symbol: str, corpus: Corpus) -> list[dict]:
    """Files whose raw content contains the symbol as a whole identifier.

    Searching runs over raw content, so stopwords and keywords match too.
    The result feeds flow_layer directly.
    """
    if not symbol:
        raise ValueError("symbol must be non-empty")
    out = []
    for i, f in enumerate(corpus.files):
        count = count_identifier(f.content, symbol)
        if count:
            out.append({"fileIndex": i, "count": count})
    return out


def _line_starts(content: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(content):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def _line_of(offset: int, starts: list[int]) -> int:
    lo, hi = 0, len(starts) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if starts[mid] <= offset:
            lo = mid
        else:
            hi = mid - 1
    return lo + 1  # 1-based


def search(query: str, corpus: Corpus, mode: str = "plain") -> SearchHits:
    """Raw-content search.

    plain: case-insensitive substring; overlapping occurrences are counted at
    every start offset. identifier: case-sensitive whole-identifier match.
    Hit lines are the distinct 1-based line numbers of match starts.
    """
    if not query:
        raise ValueError("query must be non-empty")
    if mode not in ("plain", "identifier"):
        raise ValueError("mode must be 'plain' or 'identifier'")

    hits: dict[int, tuple[int, tuple[int, ...]]] = {}
    for i, f in enumerate(corpus.files):
        offsets: list[int] = []
        if mode == "plain":
            haystack = f.content.lower()
            needle = query.lower()
            at = haystack.find(needle)
            while at >= 0:
                offsets.append(at)
                at = haystack.find(needle, at + 1)
        else:
            pattern = re.compile(
                r"(?<![A-Za-z0-9_])" + re.escape(query) + r"(?![A-Za-z0-9_])"
            )
            offsets = [m.start() for m in pattern.finditer(f.content)]
        if not offsets:
            continue
        starts = _line_starts(f.content)
        lines = tuple(sorted({_line_of(off, starts) for off in offsets}))
        hits[i] = (len(offsets), lines)
    return SearchHits(query=query, mode=mode, hits=hits)
