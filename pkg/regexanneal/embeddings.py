# -*- coding: utf-8 -*-
"""Word vectors: loading, similarity and similarity weighted sampling.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import gzip
import io
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, NamedTuple, Sequence, TextIO, Tuple, Union

import numpy as np

from . import logger
from .constants import SIMILARITY_FLOOR
from .corpus import Document, LabeledCorpus
from .errors import EmbeddingFormatError, OutOfVocabularyError
from .typing import RandomStream

_GZIP_MAGIC = b"\x1f\x8b"


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    """Immutable mapping from words to real vectors of a common dimension."""

    #: Words in row order.
    words: Tuple[str, ...]

    #: One row per word.
    matrix: np.ndarray

    _rows: Dict[str, int] = field(init=False, repr=False)
    _norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        words = tuple(self.words)
        matrix = np.array(self.matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(words) or matrix.shape[1] < 1:
            raise ValueError("matrix must have one row per word and a positive dimension")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in embedding table")
        norms = np.linalg.norm(matrix, axis=1)
        if np.any(norms == 0):
            raise ValueError(
                "zero vector for %r" % words[int(np.flatnonzero(norms == 0)[0])]
            )
        matrix.setflags(write=False)
        norms.setflags(write=False)
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "_rows", {w: i for i, w in enumerate(words)})
        object.__setattr__(self, "_norms", norms)

    @classmethod
    def from_mapping(cls, vectors: Mapping[str, Sequence[float]]) -> "EmbeddingTable":
        words = tuple(vectors)
        return cls(words, np.array([vectors[w] for w in words], dtype=np.float64))

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def vectors(self) -> Dict[str, np.ndarray]:
        return {w: self.matrix[i] for w, i in self._rows.items()}

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self._rows

    def row(self, word: str) -> int:
        try:
            return self._rows[word]
        except KeyError:
            raise OutOfVocabularyError(word) from None

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[self.row(word)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        return self.words == other.words and np.array_equal(self.matrix, other.matrix)

    __hash__ = None  # type: ignore[assignment]


def _open_text(path: str) -> TextIO:
    with open(path, "rb") as f:
        magic = f.read(2)
    if magic == _GZIP_MAGIC:
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def load_embeddings(path: Union[str, os.PathLike]) -> EmbeddingTable:
    """Load a table in the word2vec text format, optionally gzip compressed.

    The first line holds the vocabulary size and the dimension, each other
    line a word followed by its components.

    Raises
    ------
    EmbeddingFormatError
        Raised for a malformed header, a row of the wrong arity, a zero
        vector, or a row count differing from the header.

    """
    path = os.fspath(path)
    vectors: Dict[str, np.ndarray] = {}
    rows = 0
    with _open_text(path) as f:
        header = f.readline().split()
        try:
            size, dimension = (int(v) for v in header)
        except ValueError:
            raise EmbeddingFormatError(
                path, 1, "expected a header 'vocabulary-size dimension'"
            )
        if size < 0 or dimension < 1:
            raise EmbeddingFormatError(path, 1, "invalid header values")

        lineno = 1
        for lineno, line in enumerate(f, 2):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != dimension + 1:
                raise EmbeddingFormatError(
                    path,
                    lineno,
                    "expected a word and %d values, got %d values"
                    % (dimension, len(fields) - 1),
                )
            try:
                vector = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError as e:
                raise EmbeddingFormatError(path, lineno, str(e))
            if not np.any(vector):
                raise EmbeddingFormatError(path, lineno, "zero vector for %r" % fields[0])
            if fields[0] in vectors:
                logger.warning(
                    "%s, line %d: duplicate vector for %r, keeping the last one",
                    path,
                    lineno,
                    fields[0],
                )
                del vectors[fields[0]]
            vectors[fields[0]] = vector
            rows += 1

    if rows != size:
        raise EmbeddingFormatError(
            path, lineno, "header declares %d words, found %d rows" % (size, rows)
        )
    logger.debug("Loaded %d vectors of dimension %d from %s", len(vectors), dimension, path)
    if not vectors:
        return EmbeddingTable((), np.zeros((0, dimension)))
    return EmbeddingTable(tuple(vectors), np.stack(list(vectors.values())))


def save_embeddings(table: EmbeddingTable, path: Union[str, os.PathLike]) -> None:
    """Write the table in the text format read by load_embeddings.

    Components are written with their shortest exact representation so
    loading the file gives back the same table. Paths ending with ``.gz`` are
    compressed.

    """
    path = os.fspath(path)
    buffer = io.StringIO()
    buffer.write("%d %d\n" % (len(table), table.dimension))
    for word, row in zip(table.words, table.matrix):
        buffer.write(word + " " + " ".join(repr(float(v)) for v in row) + "\n")
    data = buffer.getvalue().encode("utf-8")
    if path.endswith(".gz"):
        with open(path, "wb") as raw, gzip.GzipFile(
            fileobj=raw, mode="wb", mtime=0
        ) as f:
            f.write(data)
    else:
        with open(path, "wb") as f:
            f.write(data)


def cosine_similarity(table: EmbeddingTable, w1: str, w2: str) -> float:
    """Cosine of the angle between the vectors of two words.

    Raises
    ------
    OutOfVocabularyError
        Raised if either word has no vector.

    """
    i, j = table.row(w1), table.row(w2)
    value = float(np.dot(table.matrix[i], table.matrix[j])) / float(
        table._norms[i] * table._norms[j]
    )
    return min(1.0, max(-1.0, value))


def similarity_matrix(table: EmbeddingTable, words: Sequence[str]) -> np.ndarray:
    """Pairwise cosine similarities of the given words."""
    rows = [table.row(w) for w in words]
    unit = table.matrix[rows] / table._norms[rows][:, None]
    return np.clip(unit @ unit.T, -1.0, 1.0)


def choice_probabilities(
    table: EmbeddingTable,
    anchor: str,
    candidates: Sequence[str],
    floor: float = SIMILARITY_FLOOR,
) -> np.ndarray:
    """Probability of drawing each candidate next to the anchor word.

    Each similarity is clamped to the floor before normalization. Candidates
    without a vector get the floor. An anchor without a vector gives the
    uniform distribution.

    """
    if not candidates:
        raise ValueError("no candidate to choose from")
    if anchor not in table:
        return np.full(len(candidates), 1.0 / len(candidates))
    sims = np.array(
        [
            max(cosine_similarity(table, anchor, c), floor) if c in table else floor
            for c in candidates
        ]
    )
    return sims / sims.sum()


def similarity_weighted_choice(
    table: EmbeddingTable,
    anchor: str,
    candidates: Sequence[str],
    rng: RandomStream,
) -> str:
    """Draw a candidate with probability proportional to its similarity."""
    p = choice_probabilities(table, anchor, candidates)
    return candidates[int(rng.choice(len(candidates), p=p))]


class DocumentVector(NamedTuple):
    vector: np.ndarray

    #: True when no token of the document has a vector.
    oov: bool


def document_vector(
    table: EmbeddingTable, doc: Union[Document, Iterable[str]]
) -> DocumentVector:
    """Mean of the vectors of the tokens of a document found in the table."""
    tokens = doc.tokens if isinstance(doc, Document) else tuple(doc)
    rows = [table.row(t) for t in tokens if t in table]
    if not rows:
        return DocumentVector(np.zeros(table.dimension), True)
    return DocumentVector(table.matrix[rows].mean(axis=0), False)


def build_fallback_embeddings(
    corpus: Union[LabeledCorpus, Iterable[Document]],
    window: int = 2,
    dimension_cap: int = 300,
) -> EmbeddingTable:
    """Positive pointwise mutual information vectors over a corpus.

    Co-occurrences are counted within ``window`` tokens on each side, inside a
    document. Columns are the ``dimension_cap`` most frequent words. Words
    whose vector is null over these columns are left out.

    """
    if window < 1:
        raise ValueError("window must be at least 1")
    if dimension_cap < 1:
        raise ValueError("dimension_cap must be at least 1")
    docs = [d.tokens for d in corpus]
    frequencies: Counter = Counter(t for tokens in docs for t in tokens)
    if not frequencies:
        raise ValueError("cannot build embeddings from a corpus without tokens")

    vocabulary = sorted(frequencies)
    rows = {w: i for i, w in enumerate(vocabulary)}
    contexts = sorted(frequencies, key=lambda w: (-frequencies[w], w))[:dimension_cap]
    columns = {w: j for j, w in enumerate(contexts)}

    counts = np.zeros((len(vocabulary), len(contexts)))
    totals = np.zeros(len(vocabulary))
    for tokens in docs:
        for i, word in enumerate(tokens):
            r = rows[word]
            for j in range(max(0, i - window), min(len(tokens), i + window + 1)):
                if j == i:
                    continue
                totals[r] += 1
                c = columns.get(tokens[j])
                if c is not None:
                    counts[r, c] += 1

    grand_total = totals.sum()
    if grand_total == 0:
        raise ValueError("no co-occurrence in the corpus, documents are too short")
    # Windows are symmetric so a word's total as context equals its total as target
    context_totals = np.array([totals[rows[w]] for w in contexts])
    expected = np.outer(totals, context_totals)
    ratio = np.divide(
        counts * grand_total, expected, out=np.ones_like(counts), where=counts > 0
    )
    ppmi = np.maximum(np.log(ratio), 0.0)

    keep = np.flatnonzero(ppmi.any(axis=1))
    if len(keep) < len(vocabulary):
        logger.debug("%d words without positive association dropped", len(vocabulary) - len(keep))
    if not len(keep):
        raise ValueError("no word has a positive association in the corpus")
    return EmbeddingTable(tuple(vocabulary[i] for i in keep), ppmi[keep])
