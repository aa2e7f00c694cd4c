# -*- coding: utf-8 -*-
"""Labelled corpora: loading, tokenization, word statistics and indexing.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import numpy as np

from . import logger
from .constants import CorpusFormat
from .errors import (
    ConfigurationError,
    CorpusFormatError,
    EmptyCorpusError,
    EvaluationError,
    UnknownClassError,
)
from .typing import TokenizerFunction

#: Tokenizers available by name.
_TOKENIZERS: Dict[str, TokenizerFunction] = {}


def register_tokenizer(name: str) -> Callable[[TokenizerFunction], TokenizerFunction]:
    """Register a tokenizer under a name usable in TokenizerConfig.mode.

    Word segmentation of languages written without spaces is expected to be
    done beforehand and provided through the tokens column of the corpus
    file, or plugged in through this decorator.

    """

    def _internal(func: TokenizerFunction) -> TokenizerFunction:
        if name in _TOKENIZERS:
            logger.warning(
                "Tokenizer %s is already registered. Overwriting with %s"
                % (name, func)
            )
        _TOKENIZERS[name] = func
        return func

    return _internal


@register_tokenizer("whitespace")
def _whitespace_tokenizer(text: str) -> List[str]:
    return text.split()


@register_tokenizer("character")
def _character_tokenizer(text: str) -> List[str]:
    return [c for c in text if not c.isspace()]


def available_tokenizers() -> Tuple[str, ...]:
    """Names of the registered tokenizers."""
    return tuple(sorted(_TOKENIZERS))


@dataclass(frozen=True)
class TokenizerConfig:
    """How documents are split into tokens for statistics and embeddings."""

    #: Name of a registered tokenizer.
    mode: str = "whitespace"

    #: Tokens removed after splitting.
    stopwords: FrozenSet[str] = frozenset()

    def __post_init__(self) -> None:
        if self.mode not in _TOKENIZERS:
            raise ConfigurationError(
                "Unknown tokenizer %r. Valid values are: %s"
                % (self.mode, ", ".join(available_tokenizers()))
            )
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))


def tokenize(text: str, config: Optional[TokenizerConfig] = None) -> List[str]:
    """Split a text into tokens and drop the stop words, preserving order."""
    config = config or TokenizerConfig()
    return [t for t in _TOKENIZERS[config.mode](text) if t not in config.stopwords]


def load_stopwords(path: Union[str, os.PathLike]) -> FrozenSet[str]:
    """Read a stop-word list holding one word per line."""
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip() for line in f if line.strip())


@dataclass(frozen=True)
class Document:
    """A labelled text inquiry."""

    #: Identifier unique within a corpus.
    id: int

    #: Raw text, matched by the regular expressions.
    text: str

    #: Tokens used for word statistics and embeddings.
    tokens: Tuple[str, ...]

    #: Class of the document.
    label: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("Document %d has an empty text" % self.id)
        object.__setattr__(self, "tokens", tuple(self.tokens))


@dataclass(frozen=True)
class BinaryDataset:
    """A corpus divided into the documents of a target class and all others."""

    positive: Tuple[Document, ...]
    negative: Tuple[Document, ...]
    target_class: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "positive", tuple(self.positive))
        object.__setattr__(self, "negative", tuple(self.negative))
        if not self.positive:
            raise EvaluationError(
                "class %r has no positive document" % self.target_class
            )
        overlap = {d.id for d in self.positive} & {d.id for d in self.negative}
        if overlap:
            raise ValueError(
                "documents %s are both positive and negative" % sorted(overlap)
            )

    @property
    def documents(self) -> Tuple[Document, ...]:
        """Positive documents followed by the negative ones."""
        return self.positive + self.negative

    def with_positive(self, positive: Sequence[Document]) -> "BinaryDataset":
        """Same negatives against another set of positives."""
        return BinaryDataset(tuple(positive), self.negative, self.target_class)

    def __len__(self) -> int:
        return len(self.positive) + len(self.negative)


@dataclass(frozen=True)
class LabeledCorpus:
    """Documents together with the set of classes they are labelled with."""

    documents: Tuple[Document, ...]
    classes: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "documents", tuple(self.documents))
        labels = {d.label for d in self.documents}
        classes = frozenset(self.classes) or frozenset(labels)
        missing = labels - classes
        if missing:
            raise ValueError("labels %s are not declared classes" % sorted(missing))
        object.__setattr__(self, "classes", classes)

        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            raise ValueError("document ids are not unique")

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def binary_split(self, target_class: str) -> BinaryDataset:
        """Split the corpus into the target class and the remaining documents.

        Raises
        ------
        UnknownClassError
            Raised if no document carries the target class.

        """
        if target_class not in self.classes:
            raise UnknownClassError(target_class, self.classes)
        positive = tuple(d for d in self.documents if d.label == target_class)
        negative = tuple(d for d in self.documents if d.label != target_class)
        return BinaryDataset(positive, negative, target_class)

    def train_test_split(
        self, test_fraction: float, seed: int
    ) -> Tuple["LabeledCorpus", "LabeledCorpus"]:
        """Stratified split keeping every class present in the training part.

        Document ids are kept so both parts can be traced back to the file.

        """
        if not 0 < test_fraction < 1:
            raise ConfigurationError("test fraction must lie in (0, 1)")
        rng = np.random.default_rng(seed)
        test_ids: Set[int] = set()
        for label in sorted(self.classes):
            ids = [d.id for d in self.documents if d.label == label]
            n_test = min(int(round(test_fraction * len(ids))), len(ids) - 1)
            if n_test > 0:
                chosen = rng.choice(len(ids), size=n_test, replace=False)
                test_ids.update(ids[i] for i in chosen)
        train = tuple(d for d in self.documents if d.id not in test_ids)
        test = tuple(d for d in self.documents if d.id in test_ids)
        return LabeledCorpus(train, self.classes), LabeledCorpus(test, self.classes)


def _infer_format(path: str) -> CorpusFormat:
    ext = os.path.splitext(path)[1].lower()
    if ext in (".jsonl", ".json", ".ndjson"):
        return CorpusFormat.jsonl
    return CorpusFormat.tsv


def _parse_tsv(line: str, path: str, lineno: int) -> Tuple[str, str, Optional[List[str]]]:
    fields = line.split("\t")
    if len(fields) not in (2, 3):
        raise CorpusFormatError(
            path,
            lineno,
            "expected 2 or 3 tab separated fields, got %d" % len(fields),
        )
    label, text = fields[0], fields[1]
    tokens = fields[2].split() if len(fields) == 3 else None
    return label, text, tokens


def _parse_jsonl(line: str, path: str, lineno: int) -> Tuple[str, str, Optional[List[str]]]:
    try:
        record = json.loads(line)
    except ValueError as e:
        raise CorpusFormatError(path, lineno, "invalid JSON (%s)" % e)
    if not isinstance(record, dict):
        raise CorpusFormatError(path, lineno, "expected a JSON object")
    label, text = record.get("label"), record.get("text")
    if not isinstance(label, str) or not isinstance(text, str):
        raise CorpusFormatError(path, lineno, "label and text must be strings")
    tokens = record.get("tokens")
    if tokens is not None and not (
        isinstance(tokens, list) and all(isinstance(t, str) for t in tokens)
    ):
        raise CorpusFormatError(path, lineno, "tokens must be a list of strings")
    return label, text, tokens


def load_corpus(
    path: Union[str, os.PathLike],
    format: Optional[Union[str, CorpusFormat]] = None,
    tokenizer: Optional[TokenizerConfig] = None,
) -> LabeledCorpus:
    """Load a labelled corpus from a TSV or JSONL file.

    Parameters
    ----------
    path : Union[str, os.PathLike]
        File to read, UTF-8 encoded.
    format : Union[str, CorpusFormat], optional
        Layout of the file. Inferred from the extension when omitted.
    tokenizer : TokenizerConfig, optional
        Used for records without a tokens field. Stop words are also removed
        from provided tokens.

    Returns
    -------
    LabeledCorpus
        One document per record, ids assigned sequentially from 0.

    Raises
    ------
    CorpusFormatError
        Raised on the first malformed record.
    EmptyCorpusError
        Raised if the file holds no record.

    """
    path = os.fspath(path)
    fmt = CorpusFormat(format) if format else _infer_format(path)
    config = tokenizer or TokenizerConfig()
    parse = _parse_tsv if fmt is CorpusFormat.tsv else _parse_jsonl

    documents: List[Document] = []
    with open(path, encoding="utf-8", newline="") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            label, text, tokens = parse(line, path, lineno)
            if not label:
                raise CorpusFormatError(path, lineno, "empty label")
            if not text:
                raise CorpusFormatError(path, lineno, "empty text")
            if tokens is None:
                doc_tokens = tokenize(text, config)
            else:
                doc_tokens = [t for t in tokens if t not in config.stopwords]
            documents.append(Document(len(documents), text, tuple(doc_tokens), label))

    if not documents:
        raise EmptyCorpusError(path)

    corpus = LabeledCorpus(tuple(documents))
    logger.debug(
        "Loaded %d documents (%d classes) from %s",
        len(corpus),
        len(corpus.classes),
        path,
    )
    return corpus


def write_corpus(
    corpus: Iterable[Document],
    path: Union[str, os.PathLike],
    format: Optional[Union[str, CorpusFormat]] = None,
    include_tokens: bool = False,
) -> None:
    """Write documents in a layout readable by load_corpus."""
    path = os.fspath(path)
    fmt = CorpusFormat(format) if format else _infer_format(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for doc in corpus:
            if fmt is CorpusFormat.tsv:
                if any(c in doc.text or c in doc.label for c in "\t\n"):
                    raise ValueError(
                        "Document %d cannot be written as TSV: it contains a "
                        "tab or a newline" % doc.id
                    )
                fields = [doc.label, doc.text]
                if include_tokens:
                    fields.append(" ".join(doc.tokens))
                f.write("\t".join(fields) + "\n")
            else:
                record: Dict[str, object] = {"label": doc.label, "text": doc.text}
                if include_tokens:
                    record["tokens"] = list(doc.tokens)
                f.write(json.dumps(record, ensure_ascii=False) + "\n")


@dataclass(frozen=True)
class FrequencyTable:
    """Token occurrence counts over a set of documents."""

    counts: Mapping[str, int]
    total_tokens: int

    def __getitem__(self, word: str) -> int:
        return self.counts.get(word, 0)

    def __len__(self) -> int:
        return len(self.counts)


def word_frequencies(docs: Iterable[Document]) -> FrequencyTable:
    """Count the token occurrences of every word across the documents."""
    counts: Counter = Counter()
    for doc in docs:
        counts.update(doc.tokens)
    return FrequencyTable(dict(counts), sum(counts.values()))


def _smoothed(table: FrequencyTable, word: str, vocab_size: int) -> float:
    # Add-one smoothing makes the ratio defined for words missing on one side
    return (table[word] + 1) / (table.total_tokens + vocab_size)


def ratio_keywords(
    pos: FrequencyTable, neg: FrequencyTable, td_f: float
) -> List[str]:
    """Words much more frequent in the positive documents than in the others.

    A word of the positive table is kept when its smoothed relative frequency
    exceeds td_f times its smoothed relative frequency in the negative table.
    Keywords are ranked by descending positive count, then lexicographically.

    """
    if td_f <= 0:
        raise ConfigurationError("td_f must be positive")
    vocab_size = len(set(pos.counts) | set(neg.counts))
    keywords = [
        w
        for w, c in pos.counts.items()
        if c > 0
        and _smoothed(pos, w, vocab_size) > td_f * _smoothed(neg, w, vocab_size)
    ]
    keywords.sort(key=lambda w: (-pos[w], w))
    return keywords


def ratio_ranking(
    numerator: FrequencyTable, denominator: FrequencyTable, limit: int
) -> List[str]:
    """Words of the numerator table ranked by their smoothed frequency ratio."""
    vocab_size = len(set(numerator.counts) | set(denominator.counts))
    ratios = {
        w: _smoothed(numerator, w, vocab_size) / _smoothed(denominator, w, vocab_size)
        for w, c in numerator.counts.items()
        if c > 0
    }
    return sorted(ratios, key=lambda w: (-ratios[w], w))[:limit]


@dataclass(frozen=True)
class InvertedIndex:
    """Documents containing each word of a vocabulary as a substring."""

    postings: Mapping[str, Tuple[int, ...]]

    def __contains__(self, word: object) -> bool:
        return word in self.postings

    def get(self, word: str) -> Optional[Tuple[int, ...]]:
        """Sorted ids of the documents containing the word, None if not indexed."""
        return self.postings.get(word)

    @property
    def vocabulary(self) -> FrozenSet[str]:
        return frozenset(self.postings)


def build_inverted_index(
    docs: Iterable[Document], vocabulary: Iterable[str]
) -> InvertedIndex:
    """Index the documents whose raw text contains each vocabulary word."""
    docs = sorted(docs, key=lambda d: d.id)
    postings = {
        w: tuple(d.id for d in docs if w in d.text) for w in sorted(set(vocabulary))
    }
    return InvertedIndex(postings)
