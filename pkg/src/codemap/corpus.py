"""Source-tree ingestion: file scanning, identifier tokenization, tf-idf vectors."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from pathlib import Path

import numpy as np
from scipy import sparse

from .stopwords import ENGLISH, stopword_set

DEFAULT_INCLUDE = ("*",)
DEFAULT_EXCLUDE = (".*",)  # dotfiles and dot-directories
DEFAULT_LANGUAGES = ("java",)

_BINARY_PROBE_BYTES = 8192
_CAMEL_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+")
_ALPHA_RUN_RE = re.compile(r"[A-Za-z]+")


class CorpusError(Exception):
    """Fatal ingestion failure (unreadable root, bad configuration)."""


@dataclass(frozen=True)
class SourceFile:
    path: str  # repo-relative, posix separators
    content: str
    loc: int  # non-blank line count
    basename: str  # file name without extension


@dataclass(frozen=True)
class Corpus:
    files: tuple[SourceFile, ...]
    tokens: tuple[Counter, ...]  # term multiset per file, aligned with files
    vocabulary: dict[str, int]  # term -> document frequency
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        paths = [f.path for f in self.files]
        if sorted(paths) != paths or len(set(paths)) != len(paths):
            raise CorpusError("corpus files must be unique and sorted by path")
        if len(self.tokens) != len(self.files):
            raise CorpusError("tokens must align with files")

    @property
    def paths(self) -> list[str]:
        return [f.path for f in self.files]

    def to_json_dict(self) -> dict:
        return {
            "files": [
                {"path": f.path, "loc": f.loc, "terms": dict(sorted(t.items()))}
                for f, t in zip(self.files, self.tokens)
            ],
            "vocabulary": dict(sorted(self.vocabulary.items())),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Corpus":
        files = []
        tokens = []
        for entry in data["files"]:
            name = entry["path"].rsplit("/", 1)[-1]
            stem = name.rsplit(".", 1)[0] if "." in name else name
            files.append(SourceFile(path=entry["path"], content="", loc=int(entry["loc"]), basename=stem))
            tokens.append(Counter({str(k): int(v) for k, v in entry["terms"].items()}))
        vocab = {str(k): int(v) for k, v in data["vocabulary"].items()}
        return cls(files=tuple(files), tokens=tuple(tokens), vocabulary=vocab)


def count_loc(content: str) -> int:
    return sum(1 for line in content.splitlines() if line.strip())


def tokenize(content: str, stopwords: frozenset[str] = ENGLISH) -> Counter:
    """Split identifiers into lowercase terms.

    Boundaries are camelCase transitions, underscores, and digit runs (any
    non-alphabetic character separates). Terms shorter than two characters
    and stopwords are dropped.
    """
    terms = Counter()
    for run in _ALPHA_RUN_RE.findall(content):
        for piece in _CAMEL_RE.findall(run):
            term = piece.lower()
            if len(term) >= 2 and term not in stopwords:
                terms[term] += 1
    return terms


def _is_binary(raw: bytes) -> bool:
    return b"\x00" in raw[:_BINARY_PROBE_BYTES]


def _matches(rel_path: str, name: str, patterns: tuple[str, ...]) -> bool:
    return any(fnmatchcase(rel_path, p) or fnmatchcase(name, p) for p in patterns)


def scan_tree(
    root: str | Path,
    include: tuple[str, ...] = DEFAULT_INCLUDE,
    exclude: tuple[str, ...] = DEFAULT_EXCLUDE,
    languages: tuple[str, ...] = DEFAULT_LANGUAGES,
) -> Corpus:
    """Ingest a directory tree into a tokenized, measured Corpus.

    Globs match either the repo-relative path or the bare file name. Binary
    files (NUL byte in the first 8 KiB) are skipped silently; unreadable
    files are skipped with a warning record. Files are ordered by path so
    re-scanning an unchanged tree reproduces the corpus byte for byte.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"root is not a readable directory: {root}")
    stop = stopword_set(languages)

    selected: list[Path] = []
    warnings: list[str] = []
    try:
        candidates = sorted(
            p
            for p in root.rglob("*")
            if p.is_file() or (p.is_symlink() and not p.exists())  # broken links warn below
        )
    except OSError as exc:
        raise CorpusError(f"cannot walk {root}: {exc}") from exc
    for path in candidates:
        rel = path.relative_to(root).as_posix()
        parts = rel.split("/")
        if any(_matches("/".join(parts[: i + 1]), parts[i], exclude) for i in range(len(parts))):
            continue
        if not _matches(rel, path.name, include):
            continue
        selected.append(path)

    files: list[SourceFile] = []
    tokens: list[Counter] = []
    for path in selected:
        rel = path.relative_to(root).as_posix()
        try:
            raw = path.read_bytes()
        except OSError as exc:
            warnings.append(f"skipped unreadable file {rel}: {exc}")
            continue
        if _is_binary(raw):
            continue
        content = raw.decode("utf-8", errors="replace")
        files.append(
            SourceFile(path=rel, content=content, loc=count_loc(content), basename=path.stem)
        )
        tokens.append(tokenize(content, stop))

    vocabulary: dict[str, int] = {}
    for counts in tokens:
        for term in counts:
            vocabulary[term] = vocabulary.get(term, 0) + 1

    return Corpus(files=tuple(files), tokens=tuple(tokens), vocabulary=vocabulary, warnings=tuple(warnings))


@dataclass(frozen=True)
class VectorSpace:
    """Unit-length tf-idf vectors over a shared vocabulary."""

    matrix: sparse.csr_matrix  # n_files x n_terms, rows unit length (or zero)
    vocabulary: tuple[str, ...]  # column order, sorted
    labels: tuple[str, ...]  # file paths, corpus order
    empty_rows: frozenset[int] = field(default_factory=frozenset)


def tf_idf_weight(tf: int, df: int, n_files: int) -> float:
    """(1 + ln tf) * ln(1 + N/df); positive even for corpus-wide terms."""
    return (1.0 + math.log(tf)) * math.log(1.0 + n_files / df)


def build_vectors(corpus: Corpus) -> VectorSpace:
    """Per-file unit-length tf-idf vectors; files without terms become zero rows."""
    n = len(corpus.files)
    vocab = tuple(sorted(corpus.vocabulary))
    col = {t: i for i, t in enumerate(vocab)}

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    empty: set[int] = set()
    for i, counts in enumerate(corpus.tokens):
        if not counts:
            empty.add(i)
            continue
        for term in sorted(counts):
            rows.append(i)
            cols.append(col[term])
            vals.append(tf_idf_weight(counts[term], corpus.vocabulary[term], n))

    matrix = sparse.csr_matrix(
        (np.asarray(vals, dtype=np.float64), (rows, cols)), shape=(n, max(len(vocab), 1))
    )
    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1), dtype=np.float64).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0.0)
    matrix = sparse.diags(scale) @ matrix
    return VectorSpace(
        matrix=matrix.tocsr(),
        vocabulary=vocab,
        labels=tuple(corpus.paths),
        empty_rows=frozenset(empty),
    )
