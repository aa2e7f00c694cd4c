# -*- coding: utf-8 -*-
"""Learn interpretable regular-expression classifiers by pool-based annealing.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import logging
from importlib.metadata import PackageNotFoundError, version

# Defined here since it is imported in other regexanneal modules
logger = logging.getLogger("regexanneal")
logger.addHandler(logging.NullHandler())

# Those import cannot at the top of the file
from .annealer import (  # noqa: E402
    AnnealConfig,
    TrainResult,
    run_psaw,
    run_psaw_i,
    run_psaw_p,
)
from .corpus import (  # noqa: E402
    BinaryDataset,
    Document,
    LabeledCorpus,
    TokenizerConfig,
    load_corpus,
)
from .embeddings import (  # noqa: E402
    EmbeddingTable,
    build_fallback_embeddings,
    load_embeddings,
)
from .errors import (  # noqa: E402
    ConfigurationError,
    CorpusFormatError,
    EmbeddingFormatError,
    Error,
    InvalidExpression,
    InvalidRuleFormat,
    NoDiscriminativeVocabulary,
    OutOfVocabularyError,
    UnknownClassError,
)
from .evaluator import EvalMetrics, Evaluator, objective  # noqa: E402
from .regex_model import (  # noqa: E402
    Chain,
    Classifier,
    InnerOr,
    OuterOr,
    RegexRule,
    decode,
    match_classifier,
    match_rule,
    normalize,
)


def log_to_screen(level=logging.DEBUG) -> None:
    log_to_stream(None, level)  # sys.stderr by default


def log_to_stream(stream_output, level=logging.DEBUG) -> None:
    logger.setLevel(level)
    ch = logging.StreamHandler(stream_output)
    ch.setLevel(level)

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    ch.setFormatter(formatter)

    logger.addHandler(ch)


__version__ = "unknown"
try:
    __version__ = version(__name__)
except PackageNotFoundError:
    # package is not installed
    pass


__all__ = [
    "AnnealConfig",
    "BinaryDataset",
    "Chain",
    "Classifier",
    "ConfigurationError",
    "CorpusFormatError",
    "Document",
    "EmbeddingFormatError",
    "EmbeddingTable",
    "Error",
    "EvalMetrics",
    "Evaluator",
    "InnerOr",
    "InvalidExpression",
    "InvalidRuleFormat",
    "LabeledCorpus",
    "NoDiscriminativeVocabulary",
    "OutOfVocabularyError",
    "OuterOr",
    "RegexRule",
    "TokenizerConfig",
    "TrainResult",
    "UnknownClassError",
    "build_fallback_embeddings",
    "decode",
    "load_corpus",
    "load_embeddings",
    "log_to_screen",
    "log_to_stream",
    "logger",
    "match_classifier",
    "match_rule",
    "normalize",
    "objective",
    "run_psaw",
    "run_psaw_i",
    "run_psaw_p",
]
