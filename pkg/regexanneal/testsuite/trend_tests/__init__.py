# -*- coding: utf-8 -*-
"""Long running checks of the search behaviour on synthetic corpora.

They train many classifiers with realistic budgets and take several minutes.
For this part of the testsuite to be run, you need to set the
REGEXANNEAL_TREND_TESTS environment variable.

"""

import os

import pytest

from regexanneal.synthetic import ClassPattern, GeneratorSpec, generate_synthetic_corpus
from regexanneal.testsuite import make_dataset

require_trend_tests = pytest.mark.skipif(
    not os.environ.get("REGEXANNEAL_TREND_TESTS"),
    reason="Long running trend checks. Set REGEXANNEAL_TREND_TESTS to run them.",
)

#: Planted class: fever or cough within 10 characters of child, never adult.
COUGH_CHILD = ClassPattern(
    "cough_child",
    require=(("fever", "cough"), ("child",)),
    max_gap=10,
    forbid=("adult",),
)

#: Decoys mentioning the planted words in the wrong arrangement.
DECOYS = ClassPattern(
    "other",
    weight=2.0,
    mention=("fever", "cough", "child", "adult"),
    mention_rate=0.3,
)


def planted_corpus(documents=2000, seed=0):
    spec = GeneratorSpec((COUGH_CHILD, DECOYS), documents=documents, min_length=4, max_length=12)
    return generate_synthetic_corpus(spec, seed)


def bimodal_dataset(documents=1000, seed=0):
    """Positives of two unrelated kinds against background documents."""
    spec = GeneratorSpec(
        (
            ClassPattern("cough", require=(("cough",),)),
            ClassPattern("rash", require=(("rash",),)),
            ClassPattern("other", weight=2.0),
        ),
        documents=documents,
        min_length=4,
        max_length=12,
    )
    corpus = generate_synthetic_corpus(spec, seed)
    return make_dataset(
        [d.text for d in corpus if d.label != "other"],
        [d.text for d in corpus if d.label == "other"],
    )
