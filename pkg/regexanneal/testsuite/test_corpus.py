# -*- coding: utf-8 -*-
"""Test loading, splitting and counting words of corpora."""

import json
from collections import Counter

import numpy as np
import pytest

from regexanneal import corpus
from regexanneal.corpus import (
    Document,
    FrequencyTable,
    LabeledCorpus,
    TokenizerConfig,
    build_inverted_index,
    load_corpus,
    ratio_keywords,
    ratio_ranking,
    tokenize,
    word_frequencies,
    write_corpus,
)
from regexanneal.errors import (
    ConfigurationError,
    CorpusFormatError,
    EmptyCorpusError,
    EvaluationError,
    UnknownClassError,
)
from regexanneal.testsuite import BaseTestCase, make_corpus


class TestTokenize(BaseTestCase):
    def test_stopwords_removed(self):
        config = TokenizerConfig(stopwords=frozenset({"my"}))
        assert tokenize("my girl coughs", config) == ["girl", "coughs"]

    def test_empty_text(self):
        assert tokenize("") == []

    def test_character_mode(self):
        assert tokenize("咳嗽", TokenizerConfig(mode="character")) == ["咳", "嗽"]

    def test_unknown_mode(self):
        with pytest.raises(ConfigurationError) as e:
            TokenizerConfig(mode="jieba")
        assert "whitespace" in e.exconly()

    def test_registering(self):
        @corpus.register_tokenizer("test-upper")
        def upper(text):
            return text.upper().split()

        try:
            assert "test-upper" in corpus.available_tokenizers()
            assert tokenize("a b", TokenizerConfig(mode="test-upper")) == ["A", "B"]
        finally:
            del corpus._TOKENIZERS["test-upper"]


class TestRegisteringTwice(BaseTestCase):
    CHECK_NO_WARNING = False

    def test_overwrite_warns(self, caplog):
        original = corpus._TOKENIZERS["whitespace"]
        try:
            with caplog.at_level("WARNING", logger="regexanneal"):
                corpus.register_tokenizer("whitespace")(str.split)
            assert "already registered" in caplog.text
        finally:
            corpus._TOKENIZERS["whitespace"] = original


class TestLoadCorpus(BaseTestCase):
    def test_tsv(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text(
            "cough_child\tmy girl coughs\nhairloss\tserious hair loss\n",
            encoding="utf-8",
        )
        c = load_corpus(path)
        assert len(c) == 2
        assert c.classes == {"cough_child", "hairloss"}
        assert [d.id for d in c] == [0, 1]
        assert c.documents[0].tokens == ("my", "girl", "coughs")

    def test_tsv_tokens_column(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("a\t我咳嗽\t我 咳嗽\n", encoding="utf-8")
        c = load_corpus(path, tokenizer=TokenizerConfig(stopwords=frozenset({"我"})))
        assert c.documents[0].tokens == ("咳嗽",)
        assert c.documents[0].text == "我咳嗽"

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("only_one_field\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError) as e:
            load_corpus(path)
        assert e.value.line_number == 1

    def test_malformed_later_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"label": "a", "text": "x"}\n\n{"label": 3}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError) as e:
            load_corpus(path)
        assert e.value.line_number == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("\n\n", encoding="utf-8")
        with pytest.raises(EmptyCorpusError):
            load_corpus(path)

    def test_jsonl_counts(self, tmp_path):
        rng = np.random.default_rng(0)
        labels = ["class%02d" % i for i in rng.integers(30, size=1000)]
        labels[:30] = ["class%02d" % i for i in range(30)]
        path = tmp_path / "c.jsonl"
        with open(path, "w", encoding="utf-8") as f:
            for i, label in enumerate(labels):
                f.write(json.dumps({"label": label, "text": "doc %d" % i}) + "\n")

        c = load_corpus(path)
        with open(path, encoding="utf-8") as f:
            lines = [json.loads(line) for line in f]
        assert len(c) == len(lines) == 1000
        assert len(c.classes) == len({r["label"] for r in lines}) == 30

    @pytest.mark.parametrize("fmt", ["tsv", "jsonl"])
    def test_write_then_load(self, tmp_path, fmt):
        original = make_corpus([("a", "fever and cough"), ("b", "hair loss")])
        path = tmp_path / ("c." + fmt)
        write_corpus(original, path, include_tokens=True)
        loaded = load_corpus(path)
        assert loaded.documents == original.documents

    def test_tsv_rejects_tabs(self, tmp_path):
        c = make_corpus([("a", "x\ty")])
        with pytest.raises(ValueError):
            write_corpus(c, tmp_path / "c.tsv")


class TestSplits(BaseTestCase):
    def setup_method(self):
        super().setup_method()
        self.corpus = make_corpus(
            [("a", "t%d" % i) for i in range(10)] + [("b", "u%d" % i) for i in range(5)]
        )

    def test_binary_split_preserves_count(self):
        for target in self.corpus.classes:
            ds = self.corpus.binary_split(target)
            assert len(ds.positive) + len(ds.negative) == len(self.corpus)
            assert not {d.id for d in ds.positive} & {d.id for d in ds.negative}
            assert all(d.label == target for d in ds.positive)

    def test_unknown_class(self):
        with pytest.raises(UnknownClassError) as e:
            self.corpus.binary_split("c")
        assert "'c'" in str(e.value)

    def test_no_positive(self):
        c = LabeledCorpus(self.corpus.documents, frozenset({"a", "b", "c"}))
        with pytest.raises(EvaluationError):
            c.binary_split("c")

    def test_undeclared_label(self):
        with pytest.raises(ValueError):
            LabeledCorpus(self.corpus.documents, frozenset({"a"}))

    def test_duplicate_ids(self):
        doc = Document(0, "x", ("x",), "a")
        with pytest.raises(ValueError):
            LabeledCorpus((doc, doc))

    def test_train_test_split(self):
        train, test = self.corpus.train_test_split(0.2, seed=3)
        assert len(train) + len(test) == len(self.corpus)
        assert Counter(d.label for d in test) == {"a": 2, "b": 1}
        assert not {d.id for d in train} & {d.id for d in test}
        assert self.corpus.train_test_split(0.2, seed=3) == (train, test)

    def test_train_test_split_keeps_classes(self):
        c = make_corpus([("a", "x"), ("b", "y"), ("b", "z")])
        train, test = c.train_test_split(0.9, seed=0)
        assert {d.label for d in train} == {"a", "b"}


class TestWordStatistics(BaseTestCase):
    def test_word_frequencies(self):
        docs = [Document(0, "a b a", ("a", "b", "a"), "x"), Document(1, "a", ("a",), "x")]
        table = word_frequencies(docs)
        assert table.counts == {"a": 3, "b": 1}
        assert table.total_tokens == 4
        assert table["missing"] == 0

    def test_empty(self):
        table = word_frequencies([])
        assert table.counts == {} and table.total_tokens == 0

    def test_recount(self):
        rng = np.random.default_rng(5)
        words = ["w%d" % i for i in range(50)]
        docs = [
            Document(i, "x", tuple(words[j] for j in rng.integers(50, size=12)), "x")
            for i in range(1000)
        ]
        table = word_frequencies(docs)
        expected = {}
        for d in docs:
            for t in d.tokens:
                expected[t] = expected.get(t, 0) + 1
        assert table.counts == expected
        assert table.total_tokens == sum(expected.values()) == 12000

    def test_ratio_keywords(self):
        pos = FrequencyTable({"fever": 10, "the": 10}, 20)
        neg = FrequencyTable({"the": 100, "hair": 10}, 110)
        # vocabulary of 3 words: fever 11/23 against 1/113
        assert ratio_keywords(pos, neg, 5) == ["fever"]

    def test_ratio_keywords_ties_are_lexicographic(self):
        pos = FrequencyTable({"b": 5, "a": 5, "c": 7}, 17)
        neg = FrequencyTable({}, 0)
        assert ratio_keywords(pos, neg, 0.5) == ["c", "a", "b"]

    def test_ratio_keywords_anti_monotone(self):
        rng = np.random.default_rng(1)
        words = ["w%d" % i for i in range(40)]
        pos = FrequencyTable({w: int(c) for w, c in zip(words, rng.integers(0, 30, 40))}, 0)
        pos = FrequencyTable(pos.counts, sum(pos.counts.values()))
        neg = FrequencyTable({w: int(c) for w, c in zip(words, rng.integers(0, 30, 40))}, 0)
        neg = FrequencyTable(neg.counts, sum(neg.counts.values()))
        previous = set(ratio_keywords(pos, neg, 0.5))
        for td_f in (1, 2, 4, 8, 16):
            current = set(ratio_keywords(pos, neg, td_f))
            assert current <= previous
            previous = current

    def test_ratio_keywords_needs_positive_threshold(self):
        with pytest.raises(ConfigurationError):
            ratio_keywords(FrequencyTable({}, 0), FrequencyTable({}, 0), 0)

    def test_ratio_ranking(self):
        pos = FrequencyTable({"a": 9, "b": 3, "c": 3}, 15)
        neg = FrequencyTable({"a": 9, "d": 5}, 14)
        assert ratio_ranking(pos, neg, 2) == ["b", "c"]
        assert ratio_ranking(neg, pos, 1) == ["d"]


class TestInvertedIndex(BaseTestCase):
    def test_simple(self):
        docs = [Document(0, "a cat", ("a", "cat"), "x"), Document(1, "dog", ("dog",), "x")]
        assert build_inverted_index(docs, {"a"}).postings == {"a": (0,)}
        assert build_inverted_index(docs, set()).postings == {}

    def test_substring_and_scan_oracle(self):
        rng = np.random.default_rng(2)
        alphabet = list("abcde")
        docs = [
            Document(i, "".join(rng.choice(alphabet, size=8)), (), "x")
            for i in range(100)
        ]
        vocabulary = {"ab", "c", "dd", "eab", "zz"}
        index = build_inverted_index(docs, vocabulary)
        for w in vocabulary:
            assert set(index.postings[w]) == {d.id for d in docs if w in d.text}
            assert list(index.postings[w]) == sorted(index.postings[w])
        assert index.get("missing") is None
        assert "zz" in index and index.postings["zz"] == ()
