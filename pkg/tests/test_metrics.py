import math

import numpy as np
import pytest

from codemap.corpus import build_vectors, tf_idf_weight
from codemap.metrics import (
    DissimilarityMatrix,
    blend,
    lexical_dissimilarity,
    reference_distance,
    validate_dissimilarity,
)

from conftest import corpus_from_texts


def _random_corpus(rng, n_files: int):
    words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]
    texts = {}
    for i in range(n_files):
        k = rng.integers(1, 6)
        picks = rng.choice(words, size=k, replace=True)
        texts[f"f{i:02d}.java"] = " ".join(picks)
    return corpus_from_texts(texts)


class TestLexical:
    def test_identical_vectors_distance_zero(self):
        corpus = corpus_from_texts({"a.java": "alpha beta", "b.java": "beta alpha"})
        d = lexical_dissimilarity(build_vectors(corpus))
        assert d.values[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_disjoint_terms_distance_one(self):
        corpus = corpus_from_texts({"a.java": "alpha", "b.java": "beta"})
        d = lexical_dissimilarity(build_vectors(corpus))
        assert d.values[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_shared_term_distance_by_hand(self):
        corpus = corpus_from_texts({"a.java": "shared alpha", "b.java": "shared beta"})
        d = lexical_dissimilarity(build_vectors(corpus))
        w_shared = math.log(2)
        w_priv = math.log(3)
        cos = w_shared**2 / (w_shared**2 + w_priv**2)
        assert d.values[0, 1] == pytest.approx(1.0 - cos, abs=1e-12)

    def test_empty_vector_file_at_distance_one(self):
        corpus = corpus_from_texts({"a.java": "alpha beta", "b.java": "; { }"})
        d = lexical_dissimilarity(build_vectors(corpus))
        assert d.values[0, 1] == 1.0
        assert d.values[1, 1] == 0.0

    def test_matches_brute_force_on_small_corpora(self):
        # Oracle: recompute weights and cosines from the token counts alone.
        rng = np.random.default_rng(11)
        for trial in range(5):
            corpus = _random_corpus(rng, int(rng.integers(2, 21)))
            d = lexical_dissimilarity(build_vectors(corpus))
            n = len(corpus.files)
            vectors = []
            for counts in corpus.tokens:
                vec = {
                    t: tf_idf_weight(c, corpus.vocabulary[t], n)
                    for t, c in counts.items()
                }
                norm = math.sqrt(sum(w * w for w in vec.values()))
                vectors.append({t: w / norm for t, w in vec.items()} if norm else {})
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    if not vectors[i] or not vectors[j]:
                        expected = 1.0
                    else:
                        cos = sum(
                            w * vectors[j].get(t, 0.0) for t, w in vectors[i].items()
                        )
                        expected = min(max(1.0 - cos, 0.0), 1.0)
                    assert d.values[i, j] == pytest.approx(expected, abs=1e-9)


class TestReferenceDistance:
    labels = ("a", "b", "c", "d")

    def test_direct_reference(self):
        d = reference_distance({0: {1}}, self.labels)
        assert d.values[0, 1] == pytest.approx(0.1)
        assert d.values[1, 0] == pytest.approx(0.1)

    def test_two_hop_chain(self):
        d = reference_distance({0: {1}, 1: {2}}, self.labels)
        assert d.values[0, 2] == pytest.approx(0.2)

    def test_disconnected_components_at_one(self):
        d = reference_distance({0: {1}, 2: {3}}, self.labels)
        assert d.values[0, 2] == 1.0
        assert d.values[1, 3] == 1.0

    def test_long_chains_saturate_at_one(self):
        labels = tuple(f"n{i}" for i in range(14))
        edges = {i: {i + 1} for i in range(13)}
        d = reference_distance(edges, labels)
        assert d.values[0, 9] == pytest.approx(0.9)
        assert d.values[0, 10] == 1.0
        assert d.values[0, 13] == 1.0


class TestBlend:
    def _pair(self):
        lex = DissimilarityMatrix(
            values=np.array([[0.0, 0.2], [0.2, 0.0]]), labels=("a", "b")
        )
        struct = DissimilarityMatrix(
            values=np.array([[0.0, 0.6], [0.6, 0.0]]), labels=("a", "b")
        )
        return lex, struct

    def test_alpha_zero_returns_lexical(self):
        lex, struct = self._pair()
        assert blend(lex, struct, 0.0) is lex

    def test_alpha_one_returns_structural(self):
        lex, struct = self._pair()
        assert blend(lex, struct, 1.0) is struct

    def test_midpoint(self):
        lex, struct = self._pair()
        assert blend(lex, struct, 0.5).values[0, 1] == pytest.approx(0.4)

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(5)
        n = 8
        labels = tuple(f"f{i}" for i in range(n))

        def sym(m):
            m = (m + m.T) / 2
            np.fill_diagonal(m, 0.0)
            return m

        lex = DissimilarityMatrix(values=sym(rng.random((n, n))), labels=labels)
        struct = DissimilarityMatrix(values=sym(rng.random((n, n))), labels=labels)
        prev = blend(lex, struct, 0.0).values
        for alpha in (0.25, 0.5, 0.75, 1.0):
            cur = blend(lex, struct, alpha).values
            gap_prev = np.abs(prev - struct.values)
            gap_cur = np.abs(cur - struct.values)
            assert np.all(gap_cur <= gap_prev + 1e-12)
            prev = cur

    def test_label_mismatch_rejected(self):
        lex, struct = self._pair()
        other = DissimilarityMatrix(values=struct.values.copy(), labels=("a", "c"))
        with pytest.raises(ValueError):
            blend(lex, other, 0.5)


def test_all_constructors_satisfy_invariants():
    corpus = corpus_from_texts(
        {"a.java": "alpha beta", "b.java": "beta gamma", "c.java": "gamma delta"}
    )
    lex = lexical_dissimilarity(build_vectors(corpus))
    struct = reference_distance({0: {1}}, lex.labels)
    mixed = blend(lex, struct, 0.6)
    for d in (lex, struct, mixed):
        validate_dissimilarity(d.values, unit_range=True)
