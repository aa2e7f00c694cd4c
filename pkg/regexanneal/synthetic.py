# -*- coding: utf-8 -*-
"""Synthetic labelled corpora with planted patterns.

A generator specification is an INI file. The ``[corpus]`` section sets the
number of documents, their length in words, the label noise and the
background vocabulary. Each ``[class:<name>]`` section describes one class::

    [corpus]
    documents = 1000
    min_length = 8
    max_length = 20
    noise = 0.0
    background_size = 200

    [class:cough_child]
    weight = 1
    require = fever|cough, child
    max_gap = 10
    forbid = adult

    [class:other]
    weight = 3
    mention = fever, cough, child, adult
    mention_rate = 0.3

``require`` lists ordered groups of words, a document of the class holding
one word of each group in order, consecutive groups separated by at most
``max_gap`` characters. A document of the class never contains a word of
``forbid``. ``mention`` words are decoys inserted with probability
``mention_rate`` each. No document satisfies the planted pattern of a class
other than its own, before label noise is applied.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import os
from configparser import ConfigParser
from configparser import Error as ConfigParserError
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import logger
from .corpus import Document, LabeledCorpus
from .errors import SyntheticSpecError
from .regex_model import UNRESTRICTED, Chain, RegexRule, make_atom, match_rule
from .typing import RandomStream

#: Draws allowed to produce one document before giving up.
MAX_DOCUMENT_ATTEMPTS = 1000

_CLASS_PREFIX = "class:"


def _split_list(value: str) -> Tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


@dataclass(frozen=True)
class ClassPattern:
    """Planted pattern of one class."""

    name: str
    weight: float = 1.0

    #: Ordered groups of alternative words.
    require: Tuple[Tuple[str, ...], ...] = ()

    #: Maximal number of characters between consecutive groups.
    max_gap: Optional[int] = None

    forbid: Tuple[str, ...] = ()
    mention: Tuple[str, ...] = ()
    mention_rate: float = 0.0

    def __post_init__(self) -> None:
        if not self.name:
            raise SyntheticSpecError("class names must be non empty")
        if self.weight <= 0:
            raise SyntheticSpecError("class %r: weight must be positive" % self.name)
        if any(not g or any(not w or " " in w for w in g) for g in self.require):
            raise SyntheticSpecError(
                "class %r: required groups hold non empty single words" % self.name
            )
        if self.max_gap is not None and self.max_gap < 1:
            raise SyntheticSpecError(
                "class %r: max_gap must be at least 1 character" % self.name
            )
        if self.forbid and not self.require:
            raise SyntheticSpecError(
                "class %r: forbidden words need required words" % self.name
            )
        if not 0 <= self.mention_rate <= 1:
            raise SyntheticSpecError(
                "class %r: mention_rate must lie in [0, 1]" % self.name
            )

    @property
    def words(self) -> Tuple[str, ...]:
        """Every word named by the pattern."""
        required = tuple(w for g in self.require for w in g)
        return tuple(dict.fromkeys(required + self.forbid + self.mention))

    @property
    def rule(self) -> Optional[RegexRule]:
        """Rule matching exactly the texts satisfying the pattern."""
        if not self.require:
            return None
        gap = UNRESTRICTED if self.max_gap is None else self.max_gap
        positive = Chain.of(*(make_atom(g) for g in self.require), gap=gap)
        return RegexRule.from_chains([positive], [Chain((w,)) for w in self.forbid])


@dataclass(frozen=True)
class GeneratorSpec:
    classes: Tuple[ClassPattern, ...]
    documents: int = 1000
    min_length: int = 8
    max_length: int = 20
    noise: float = 0.0
    background_size: int = 200

    #: Explicit vocabulary. When empty, ``background_size`` words are made up.
    vocabulary: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.classes:
            raise SyntheticSpecError("at least one class section is needed")
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise SyntheticSpecError("duplicate class names")
        if self.documents < 1:
            raise SyntheticSpecError("documents must be at least 1")
        if not 1 <= self.min_length <= self.max_length:
            raise SyntheticSpecError("lengths must satisfy 1 <= min_length <= max_length")
        if not 0 <= self.noise <= 1:
            raise SyntheticSpecError("noise must lie in [0, 1]")
        if self.noise > 0 and len(self.classes) < 2:
            raise SyntheticSpecError("label noise needs at least two classes")
        if self.vocabulary:
            known = set(self.vocabulary)
            for c in self.classes:
                missing = [w for w in c.words if w not in known]
                if missing:
                    raise SyntheticSpecError(
                        "class %r uses words missing from the vocabulary: %s"
                        % (c.name, ", ".join(missing))
                    )
        elif self.background_size < 1:
            raise SyntheticSpecError("background_size must be at least 1")
        if not self.background:
            raise SyntheticSpecError("the vocabulary has no background word")

    @property
    def pattern_words(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(w for c in self.classes for w in c.words))

    @property
    def background(self) -> Tuple[str, ...]:
        """Words filling the documents around the planted ones."""
        if not self.vocabulary:
            width = len(str(self.background_size))
            return tuple("bg%0*d" % (width, i) for i in range(self.background_size))
        excluded = set(self.pattern_words)
        return tuple(w for w in dict.fromkeys(self.vocabulary) if w not in excluded)

    def planted_rules(self) -> Dict[str, RegexRule]:
        """Rule of each class with required words."""
        return {c.name: c.rule for c in self.classes if c.rule is not None}

    @classmethod
    def from_config(cls, parser: ConfigParser) -> "GeneratorSpec":
        try:
            corpus = parser["corpus"] if parser.has_section("corpus") else {}
            classes = []
            for section in parser.sections():
                if not section.startswith(_CLASS_PREFIX):
                    continue
                s = parser[section]
                max_gap = s.get("max_gap", "").strip()
                classes.append(
                    ClassPattern(
                        name=section[len(_CLASS_PREFIX) :].strip(),
                        weight=s.getfloat("weight", 1.0),
                        require=tuple(
                            tuple(w.strip() for w in group.split("|"))
                            for group in _split_list(s.get("require", ""))
                        ),
                        max_gap=int(max_gap) if max_gap else None,
                        forbid=_split_list(s.get("forbid", "")),
                        mention=_split_list(s.get("mention", "")),
                        mention_rate=s.getfloat("mention_rate", 0.0),
                    )
                )
            return cls(
                classes=tuple(classes),
                documents=int(corpus.get("documents", 1000)),
                min_length=int(corpus.get("min_length", 8)),
                max_length=int(corpus.get("max_length", 20)),
                noise=float(corpus.get("noise", 0.0)),
                background_size=int(corpus.get("background_size", 200)),
                vocabulary=tuple(corpus.get("vocabulary", "").split()),
            )
        except (ValueError, ConfigParserError) as e:
            if isinstance(e, SyntheticSpecError):
                raise
            raise SyntheticSpecError(str(e)) from e


def load_generator_spec(path: Union[str, os.PathLike]) -> GeneratorSpec:
    parser = ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except ConfigParserError as e:
        raise SyntheticSpecError(str(e)) from e
    return GeneratorSpec.from_config(parser)


def _planted_block(
    pattern: ClassPattern, background: Sequence[str], rng: RandomStream
) -> List[List[str]]:
    """Word runs holding the required groups, fillers included."""
    runs: List[List[str]] = []
    for group in pattern.require:
        word = group[int(rng.integers(len(group)))]
        if runs and pattern.max_gap is not None:
            # Consecutive groups are one space apart; fillers widen the gap.
            separation = 1
            for _ in range(int(rng.integers(3))):
                filler = background[int(rng.integers(len(background)))]
                if separation + len(filler) + 1 > pattern.max_gap:
                    break
                runs[-1].append(filler)
                separation += len(filler) + 1
            runs[-1].append(word)
        else:
            runs.append([word])
    return runs


def _draw_document(
    pattern: ClassPattern, spec: GeneratorSpec, rng: RandomStream
) -> List[str]:
    background = spec.background
    length = int(rng.integers(spec.min_length, spec.max_length + 1))
    tokens = [background[i] for i in rng.integers(len(background), size=length)]
    for word in pattern.mention:
        if rng.random() < pattern.mention_rate:
            tokens.insert(int(rng.integers(len(tokens) + 1)), word)

    # Unbounded groups are inserted at increasing random positions.
    position = 0
    for run in _planted_block(pattern, background, rng):
        position = int(rng.integers(position, len(tokens) + 1))
        tokens[position:position] = run
        position += len(run)
    return tokens


def generate_synthetic_corpus(spec: GeneratorSpec, seed: int) -> LabeledCorpus:
    """Draw a labelled corpus, a pure function of the specification and seed.

    Raises
    ------
    SyntheticSpecError
        Raised if documents satisfying the constraints cannot be drawn.

    """
    rng = np.random.default_rng(seed)
    rules = spec.planted_rules()
    weights = np.array([c.weight for c in spec.classes], dtype=np.float64)
    labels = rng.choice(len(spec.classes), size=spec.documents, p=weights / weights.sum())

    texts: List[Tuple[str, List[str]]] = []
    for label in labels:
        pattern = spec.classes[int(label)]
        own = rules.get(pattern.name)
        others = [r for name, r in rules.items() if name != pattern.name]
        for _ in range(MAX_DOCUMENT_ATTEMPTS):
            tokens = _draw_document(pattern, spec, rng)
            text = " ".join(tokens)
            if own is not None and not match_rule(own, text):
                continue
            if any(match_rule(r, text) for r in others):
                continue
            break
        else:
            raise SyntheticSpecError(
                "could not draw a document of class %r satisfying the patterns"
                % pattern.name
            )
        texts.append((text, tokens))

    names = [c.name for c in spec.classes]
    final = [names[int(label)] for label in labels]
    flips = int(round(spec.noise * spec.documents))
    if flips:
        for i in rng.choice(spec.documents, size=flips, replace=False):
            choices = [n for n in names if n != final[int(i)]]
            final[int(i)] = choices[int(rng.integers(len(choices)))]
        logger.debug("%d labels flipped", flips)

    documents = [
        Document(i, text, tuple(tokens), label)
        for i, ((text, tokens), label) in enumerate(zip(texts, final))
    ]
    return LabeledCorpus(documents, frozenset(names))
