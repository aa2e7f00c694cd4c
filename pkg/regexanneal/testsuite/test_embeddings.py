# -*- coding: utf-8 -*-
"""Test word vector loading, similarity and weighted choices."""

import gzip
import math

import numpy as np
import pytest

from regexanneal.embeddings import (
    EmbeddingTable,
    build_fallback_embeddings,
    choice_probabilities,
    cosine_similarity,
    document_vector,
    load_embeddings,
    save_embeddings,
    similarity_matrix,
    similarity_weighted_choice,
)
from regexanneal.errors import EmbeddingFormatError, OutOfVocabularyError
from regexanneal.testsuite import BaseTestCase, make_corpus


def _table():
    return EmbeddingTable.from_mapping(
        {"a": [1.0, 0.0], "b": [0.0, 1.0], "c": [1.0, 1.0], "d": [-1.0, 0.0]}
    )


class TestEmbeddingTable(BaseTestCase):
    def test_lookup(self):
        t = _table()
        assert len(t) == 4 and t.dimension == 2
        assert "a" in t and "z" not in t
        np.testing.assert_array_equal(t.vector("c"), [1.0, 1.0])
        with pytest.raises(OutOfVocabularyError):
            t.vector("z")

    def test_rejects_zero_vector(self):
        with pytest.raises(ValueError):
            EmbeddingTable.from_mapping({"a": [0.0, 0.0]})

    def test_read_only(self):
        with pytest.raises(ValueError):
            _table().matrix[0, 0] = 3.0


class TestLoadEmbeddings(BaseTestCase):
    def test_two_words(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("2 3\ncough 1 0 0\nfever 0 1 0\n", encoding="utf-8")
        t = load_embeddings(path)
        assert t.words == ("cough", "fever")
        assert t.dimension == 3

    def test_arity_error(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("2 3\ncough 1 0 0\nfever 0 1\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError) as e:
            load_embeddings(path)
        assert e.value.line_number == 3

    def test_bad_header(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("cough 1 0 0\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError) as e:
            load_embeddings(path)
        assert e.value.line_number == 1

    def test_zero_vector(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1 2\ncough 0 0\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError):
            load_embeddings(path)

    def test_row_count(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("3 2\ncough 0 1\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError):
            load_embeddings(path)

    def test_gzip(self, tmp_path):
        path = tmp_path / "v.txt.gz"
        with gzip.open(path, "wt", encoding="utf-8") as f:
            f.write("1 2\ncough 0.5 1\n")
        np.testing.assert_array_equal(load_embeddings(path).vector("cough"), [0.5, 1])

    @pytest.mark.parametrize("name", ["v.txt", "v.txt.gz"])
    def test_save_load(self, tmp_path, name):
        rng = np.random.default_rng(0)
        table = EmbeddingTable(("x", "y", "咳嗽"), rng.normal(size=(3, 5)))
        save_embeddings(table, tmp_path / name)
        assert load_embeddings(tmp_path / name) == table


class TestDuplicateRows(BaseTestCase):
    CHECK_NO_WARNING = False

    def test_last_wins(self, tmp_path, caplog):
        path = tmp_path / "v.txt"
        path.write_text("2 2\ncough 1 0\ncough 0 1\n", encoding="utf-8")
        with caplog.at_level("WARNING", logger="regexanneal"):
            t = load_embeddings(path)
        np.testing.assert_array_equal(t.vector("cough"), [0, 1])
        assert "duplicate" in caplog.text


class TestSimilarity(BaseTestCase):
    def test_cosine(self):
        t = _table()
        assert cosine_similarity(t, "a", "a") == pytest.approx(1.0)
        assert cosine_similarity(t, "a", "b") == pytest.approx(0.0)
        assert cosine_similarity(t, "a", "c") == pytest.approx(1 / math.sqrt(2))
        assert cosine_similarity(t, "a", "d") == pytest.approx(-1.0)

    def test_bounds_on_random_vectors(self):
        rng = np.random.default_rng(3)
        t = EmbeddingTable(tuple("w%d" % i for i in range(30)), rng.normal(size=(30, 8)))
        for _ in range(200):
            i, j = rng.integers(30, size=2)
            s = cosine_similarity(t, t.words[i], t.words[j])
            assert -1.0 <= s <= 1.0
            assert s == pytest.approx(cosine_similarity(t, t.words[j], t.words[i]))

    def test_oov(self):
        with pytest.raises(OutOfVocabularyError):
            cosine_similarity(_table(), "a", "zz")

    def test_matrix(self):
        t = _table()
        m = similarity_matrix(t, ["a", "b", "c"])
        assert m.shape == (3, 3)
        assert m[0, 2] == pytest.approx(cosine_similarity(t, "a", "c"))
        np.testing.assert_allclose(np.diag(m), 1.0)


class TestWeightedChoice(BaseTestCase):
    def test_probabilities_clamped(self):
        t = _table()
        p = choice_probabilities(t, "a", ["a", "c", "b", "d", "oov"])
        sims = np.array([1.0, 1 / math.sqrt(2), 1e-6, 1e-6, 1e-6])
        np.testing.assert_allclose(p, sims / sims.sum())

    def test_oov_anchor_is_uniform(self):
        p = choice_probabilities(_table(), "oov", ["a", "b", "c", "d"])
        np.testing.assert_allclose(p, 0.25)

    def test_single_candidate(self):
        rng = np.random.default_rng(0)
        assert similarity_weighted_choice(_table(), "a", ["b"], rng) == "b"

    def test_no_candidate(self):
        with pytest.raises(ValueError):
            choice_probabilities(_table(), "a", [])

    def test_always_most_similar(self):
        t = EmbeddingTable.from_mapping({"x": [1.0, 0.0], "y": [1.0, 0.0], "z": [0.0, 1.0]})
        rng = np.random.default_rng(4)
        draws = {similarity_weighted_choice(t, "x", ["y", "z"], rng) for _ in range(1000)}
        assert draws == {"y"}

    @pytest.mark.parametrize("seed", [0, 1])
    def test_empirical_frequencies(self, seed):
        rng = np.random.default_rng(seed)
        words = tuple("w%d" % i for i in range(12))
        t = EmbeddingTable(words, np.abs(rng.normal(size=(12, 4))) + 0.01)
        candidates = list(rng.choice(words[1:], size=10, replace=False))
        expected = choice_probabilities(t, words[0], candidates)
        draws = 20000
        counts = dict.fromkeys(candidates, 0)
        for _ in range(draws):
            counts[similarity_weighted_choice(t, words[0], candidates, rng)] += 1
        observed = np.array([counts[c] / draws for c in candidates])
        np.testing.assert_allclose(observed, expected, atol=0.01)

    def test_documented_probabilities(self):
        # cosines 0.9, 0.3 and 0.3 to the anchor
        t = EmbeddingTable.from_mapping(
            {
                "x": [1.0, 0.0],
                "p": [0.9, math.sqrt(0.19)],
                "q": [0.3, math.sqrt(0.91)],
                "r": [0.3, -math.sqrt(0.91)],
            }
        )
        np.testing.assert_allclose(
            choice_probabilities(t, "x", ["p", "q", "r"]), [0.6, 0.2, 0.2], atol=1e-12
        )
        np.testing.assert_allclose(choice_probabilities(t, "x", ["q", "r"]), [0.5, 0.5])


class TestDocumentVector(BaseTestCase):
    def test_mean(self):
        v = document_vector(_table(), ["a", "b", "unknown"])
        np.testing.assert_allclose(v.vector, [0.5, 0.5])
        assert not v.oov

    def test_all_oov(self):
        v = document_vector(_table(), ["x", "y"])
        np.testing.assert_array_equal(v.vector, [0.0, 0.0])
        assert v.oov

    def test_document(self):
        doc = make_corpus([("l", "c c d")]).documents[0]
        np.testing.assert_allclose(document_vector(_table(), doc).vector, [1 / 3, 2 / 3])


class TestFallbackEmbeddings(BaseTestCase):
    def test_identical_contexts(self):
        corpus = make_corpus([("l", "x a y"), ("l", "x b y")])
        t = build_fallback_embeddings(corpus, window=1, dimension_cap=10)
        assert cosine_similarity(t, "a", "b") == pytest.approx(1.0)

    def test_deterministic(self):
        corpus = make_corpus(
            [("l", "fever child cough"), ("l", "hair loss serious"), ("l", "child rash")]
        )
        assert build_fallback_embeddings(corpus) == build_fallback_embeddings(corpus)

    def test_dimension_cap(self):
        corpus = make_corpus([("l", " ".join("w%d" % i for i in range(40)))])
        t = build_fallback_embeddings(corpus, window=2, dimension_cap=5)
        assert t.dimension == 5

    def test_empty(self):
        corpus = make_corpus([("l", " ")])
        with pytest.raises(ValueError):
            build_fallback_embeddings(corpus)

    def test_synonyms_closer_than_background(self):
        corpus = make_corpus(
            [
                ("l", "my child has a high fever temperature"),
                ("l", "she had high pyrexia temperature again"),
                ("l", "a dry cough night again"),
                ("l", "the dry hack night"),
                ("l", "the table near the chair"),
                ("l", "a lamp near the high table"),
                ("l", "green chair and green lamp"),
            ]
        )
        t = build_fallback_embeddings(corpus, window=1)
        pairs = [("fever", "pyrexia"), ("cough", "hack")]
        others = ["table", "chair", "lamp", "green", "fever", "cough"]
        for first, second in pairs:
            similarity = cosine_similarity(t, first, second)
            for word in (first, second):
                for other in others:
                    if other in (first, second):
                        continue
                    assert similarity > cosine_similarity(t, word, other), (word, other)
