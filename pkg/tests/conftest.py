from __future__ import annotations

import shutil
from collections import Counter
from pathlib import Path

import pytest

from codemap import accel
from codemap.corpus import Corpus, SourceFile, count_loc, tokenize
from codemap.pipeline import BuildConfig, build_map
from codemap.stopwords import stopword_set

FIXTURE_TREE = Path(__file__).parent / "fixtures" / "sample_tree"
GOLDEN_DIR = Path(__file__).parent / "golden"

# Acceptance builds run at the spec's test resolution.
FIXTURE_CONFIG = BuildConfig(resolution=128)


@pytest.fixture
def numpy_kernels(monkeypatch):
    """Pin the pure-numpy kernel path (golden outputs are generated on it)."""
    monkeypatch.setattr(accel, "NUMBA_ENABLED", False)


@pytest.fixture
def tree_copy(tmp_path):
    """Mutable copy of the bundled fixture tree."""
    dest = tmp_path / "tree"
    shutil.copytree(FIXTURE_TREE, dest)
    return dest


def corpus_from_texts(texts: dict[str, str], languages=("java",)) -> Corpus:
    """Assemble a corpus directly from path -> content (no filesystem)."""
    stop = stopword_set(languages)
    files = []
    tokens = []
    for path in sorted(texts):
        content = texts[path]
        name = path.rsplit("/", 1)[-1]
        stem = name.rsplit(".", 1)[0] if "." in name else name
        files.append(SourceFile(path=path, content=content, loc=count_loc(content), basename=stem))
        tokens.append(tokenize(content, stop))
    vocabulary: dict[str, int] = {}
    for counts in tokens:
        for term in counts:
            vocabulary[term] = vocabulary.get(term, 0) + 1
    return Corpus(files=tuple(files), tokens=tuple(tokens), vocabulary=vocabulary)


@pytest.fixture(scope="session")
def fixture_build():
    """One shared full build of the bundled tree at acceptance resolution."""
    return build_map(FIXTURE_TREE, FIXTURE_CONFIG)
