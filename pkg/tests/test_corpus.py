import json
import math
from collections import Counter

import numpy as np
import pytest

from codemap.corpus import (
    CorpusError,
    build_vectors,
    count_loc,
    scan_tree,
    tokenize,
)

from conftest import FIXTURE_TREE, corpus_from_texts


class TestScanTree:
    def test_empty_directory(self, tmp_path):
        corpus = scan_tree(tmp_path)
        assert corpus.files == ()
        assert corpus.vocabulary == {}

    def test_loc_counts_non_blank_lines(self, tmp_path):
        (tmp_path / "A.java").write_text("class A {\n\nint x;\n}\n")
        corpus = scan_tree(tmp_path)
        assert len(corpus.files) == 1
        assert corpus.files[0].loc == 3
        assert corpus.files[0].basename == "A"

    def test_exclude_glob_matches_naive_walk(self, tmp_path):
        # Oracle: list the directory by hand and apply the rule directly.
        (tmp_path / "A.java").write_text("class A {}\n")
        (tmp_path / "B.java").write_text("class B {}\n")
        corpus = scan_tree(tmp_path, exclude=("B*",))
        expected = sorted(
            p.name for p in tmp_path.iterdir() if not p.name.startswith("B")
        )
        assert corpus.paths == expected == ["A.java"]

    def test_include_globs(self, tmp_path):
        (tmp_path / "A.java").write_text("class A {}\n")
        (tmp_path / "notes.txt").write_text("hello\n")
        corpus = scan_tree(tmp_path, include=("*.java",))
        assert corpus.paths == ["A.java"]

    def test_binary_files_skipped(self, tmp_path):
        (tmp_path / "A.java").write_text("class A {}\n")
        (tmp_path / "blob.bin").write_bytes(b"MZ\x00\x01binary")
        corpus = scan_tree(tmp_path)
        assert corpus.paths == ["A.java"]

    def test_unreadable_file_warns_and_skips(self, tmp_path):
        (tmp_path / "A.java").write_text("class A {}\n")
        (tmp_path / "broken.java").symlink_to(tmp_path / "missing-target.java")
        corpus = scan_tree(tmp_path)
        assert corpus.paths == ["A.java"]
        assert any("broken.java" in w for w in corpus.warnings)

    def test_unreadable_root_is_fatal(self, tmp_path):
        with pytest.raises(CorpusError):
            scan_tree(tmp_path / "does-not-exist")

    def test_rescan_is_byte_identical(self, tmp_path):
        (tmp_path / "A.java").write_text("class AlphaBeta { int gammaDelta; }\n")
        (tmp_path / "sub").mkdir()
        (tmp_path / "sub" / "B.java").write_text("class BetaGamma extends AlphaBeta {}\n")
        first = json.dumps(scan_tree(tmp_path).to_json_dict(), sort_keys=True)
        second = json.dumps(scan_tree(tmp_path).to_json_dict(), sort_keys=True)
        assert first == second

    def test_document_frequencies_match_recount(self):
        corpus = scan_tree(FIXTURE_TREE)
        for term, df in corpus.vocabulary.items():
            recount = sum(1 for counts in corpus.tokens if term in counts)
            assert df == recount
        assert all(1 <= df <= len(corpus.files) for df in corpus.vocabulary.values())


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == Counter()

    def test_camel_case_and_stopwords(self):
        # "or" is an English stopword; the rest of the split survives.
        terms = tokenize("getSettingOrDefault MenuAction")
        assert terms == Counter(
            {"get": 1, "setting": 1, "default": 1, "menu": 1, "action": 1}
        )

    def test_underscores_and_digit_runs(self):
        assert tokenize("foo_bar2Baz") == Counter({"foo": 1, "bar": 1, "baz": 1})

    def test_short_terms_dropped(self):
        assert tokenize("x yZ q") == Counter()

    def test_acronym_boundary(self):
        assert tokenize("HTTPServer") == Counter({"http": 1, "server": 1})

    def test_idempotent_on_joined_output(self):
        for f in scan_tree(FIXTURE_TREE).files:
            terms = tokenize(f.content)
            rejoined = " ".join(terms.elements())
            assert tokenize(rejoined) == terms


class TestBuildVectors:
    def test_single_term_normalizes_to_one(self):
        corpus = corpus_from_texts({"a.java": "alpha alpha alpha"})
        vs = build_vectors(corpus)
        row = vs.matrix[0].toarray().ravel()
        assert vs.vocabulary == ("alpha",)
        assert row[0] == pytest.approx(1.0, abs=1e-12)

    def test_identical_token_multisets_identical_vectors(self):
        corpus = corpus_from_texts(
            {"a.java": "alpha beta beta", "b.java": "beta alpha beta"}
        )
        vs = build_vectors(corpus)
        assert np.array_equal(vs.matrix[0].toarray(), vs.matrix[1].toarray())

    def test_two_file_shared_term_weights_by_hand(self):
        # a: {shared, alpha}; b: {shared, beta}; N=2, df(shared)=2, df(alpha)=1
        corpus = corpus_from_texts(
            {"a.java": "shared alpha", "b.java": "shared beta"}
        )
        vs = build_vectors(corpus)
        w_shared = (1 + math.log(1)) * math.log(1 + 2 / 2)
        w_priv = (1 + math.log(1)) * math.log(1 + 2 / 1)
        norm = math.hypot(w_shared, w_priv)
        row = dict(zip(vs.vocabulary, vs.matrix[0].toarray().ravel()))
        assert row["shared"] == pytest.approx(w_shared / norm, abs=1e-12)
        assert row["alpha"] == pytest.approx(w_priv / norm, abs=1e-12)
        cosine = float((vs.matrix[0] @ vs.matrix[1].T).toarray()[0, 0])
        assert cosine == pytest.approx((w_shared / norm) ** 2, abs=1e-12)

    def test_unit_norms(self):
        corpus = scan_tree(FIXTURE_TREE)
        vs = build_vectors(corpus)
        norms = np.sqrt(np.asarray(vs.matrix.multiply(vs.matrix).sum(axis=1)).ravel())
        for i, norm in enumerate(norms):
            if i in vs.empty_rows:
                assert norm == 0.0
            else:
                assert abs(norm - 1.0) < 1e-9

    def test_empty_token_file_flagged(self):
        corpus = corpus_from_texts({"a.java": "alpha beta", "empty.java": "{ } ;"})
        vs = build_vectors(corpus)
        assert vs.empty_rows == {1}


def test_count_loc():
    assert count_loc("") == 0
    assert count_loc("a\n\n  \nb\n") == 2


def test_corpus_json_round_trip():
    from codemap.corpus import Corpus

    corpus = scan_tree(FIXTURE_TREE)
    data = json.loads(json.dumps(corpus.to_json_dict(), sort_keys=True))
    back = Corpus.from_json_dict(data)
    assert back.paths == corpus.paths
    assert back.vocabulary == corpus.vocabulary
    assert [dict(t) for t in back.tokens] == [dict(t) for t in corpus.tokens]
    assert [f.loc for f in back.files] == [f.loc for f in corpus.files]
    assert [f.basename for f in back.files] == [f.basename for f in corpus.files]
