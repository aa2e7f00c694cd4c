# -*- coding: utf-8 -*-
"""Run configuration assembled from INI files and command line flags.

Values are read in order from the user configuration files, an explicit
configuration file and the command line, later sources overriding earlier
ones. The ``[anneal]`` section holds the search parameters and the ``[run]``
section everything else::

    [anneal]
    pool_capacity = 10
    total_iterations = 1000
    distance_table = 0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 100

    [run]
    corpus = train.tsv
    classes = cough_child, hairloss
    embeddings = fallback
    strategy = psaw-i
    out = models

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import argparse
import dataclasses
from configparser import ConfigParser, SectionProxy
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

from .annealer import AnnealConfig
from .constants import CorpusFormat, Strategy
from .errors import ConfigurationError

#: Value of the embeddings setting selecting vectors built from the corpus.
FALLBACK_EMBEDDINGS = "fallback"


def _int_tuple(value: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in value.replace(",", " ").split())


def _str_tuple(value: str) -> Tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _boolean(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered not in ConfigParser.BOOLEAN_STATES:
        raise ValueError("not a boolean: %r" % value)
    return ConfigParser.BOOLEAN_STATES[lowered]


#: Parser of each key of the [anneal] section.
ANNEAL_KEYS: Dict[str, Callable[[str], Any]] = {
    "t_start": float,
    "t_end": float,
    "pool_capacity": int,
    "total_iterations": int,
    "beta": float,
    "rules_per_solution": int,
    "td_f": float,
    "n_w": int,
    "td_s": float,
    "stall_limit": int,
    "seed": int,
    "distance_table": _int_tuple,
    "complexity_cap": int,
    "positive_part_probability": float,
    "filter_negatives": _boolean,
    "workers": int,
}

#: Parser of each key of the [run] section.
RUN_KEYS: Dict[str, Callable[[str], Any]] = {
    "corpus": str,
    "test_corpus": str,
    "classes": _str_tuple,
    "embeddings": str,
    "strategy": Strategy,
    "tokenizer": str,
    "stopwords": str,
    "corpus_format": CorpusFormat,
    "out": str,
    "holdout": float,
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a training run needs besides the data itself."""

    anneal: AnnealConfig = field(default_factory=AnnealConfig)

    corpus: Optional[str] = None

    #: Held-out corpus used for the test metrics.
    test_corpus: Optional[str] = None

    #: Classes to learn, every class of the corpus when empty.
    classes: Tuple[str, ...] = ()

    #: Path of a word vector file or FALLBACK_EMBEDDINGS.
    embeddings: str = FALLBACK_EMBEDDINGS

    strategy: Strategy = Strategy.psaw
    tokenizer: str = "whitespace"
    stopwords: Optional[str] = None
    corpus_format: Optional[CorpusFormat] = None
    out: str = "."

    #: Fraction of the corpus held out when no test corpus is given.
    holdout: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "classes", tuple(self.classes))
        if not 0 <= self.holdout < 1:
            raise ConfigurationError("holdout must lie in [0, 1)")
        if self.holdout and self.test_corpus:
            raise ConfigurationError("holdout and test_corpus are exclusive")
        if (
            self.strategy in (Strategy.psaw_p_kmeans, Strategy.psaw_p_random)
            and self.anneal.rules_per_solution < 2
        ):
            raise ConfigurationError("the parallel strategies need at least 2 rules")


def _read_section(
    section: SectionProxy, keys: Dict[str, Callable[[str], Any]]
) -> Dict[str, Any]:
    values = {}
    for key, raw in section.items():
        if key not in keys:
            raise ConfigurationError(
                "unknown key %r in [%s]. Valid keys are: %s"
                % (key, section.name, ", ".join(sorted(keys)))
            )
        try:
            values[key] = keys[key](raw)
        except ValueError as e:
            raise ConfigurationError("[%s] %s: %s" % (section.name, key, e)) from e
    return values


def build_run_config(
    parser: ConfigParser, args: Optional[argparse.Namespace] = None
) -> RunConfig:
    """Merge configuration file values with command line flags.

    Flags left to None on the namespace do not override anything, which is
    how the command line parsers declare their defaults.

    Raises
    ------
    ConfigurationError
        Raised for unknown keys, unparsable values or invalid combinations.

    """
    anneal: Dict[str, Any] = {}
    run: Dict[str, Any] = {}
    if parser.has_section("anneal"):
        anneal.update(_read_section(parser["anneal"], ANNEAL_KEYS))
    if parser.has_section("run"):
        run.update(_read_section(parser["run"], RUN_KEYS))

    if args is not None:
        flags = vars(args)
        for key in ANNEAL_KEYS:
            if flags.get(key) is not None:
                anneal[key] = flags[key]
        for key in RUN_KEYS:
            if flags.get(key) is not None:
                run[key] = flags[key]

    try:
        return RunConfig(anneal=AnnealConfig(**anneal), **run)
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigurationError):
            raise
        raise ConfigurationError(str(e)) from e


def run_config_to_parser(config: RunConfig) -> ConfigParser:
    """INI form of a configuration, readable by build_run_config."""
    parser = ConfigParser(interpolation=None)
    anneal = {}
    for f in dataclasses.fields(AnnealConfig):
        # Results do not depend on the number of workers.
        if f.name == "workers":
            continue
        value = getattr(config.anneal, f.name)
        if isinstance(value, tuple):
            value = ", ".join(str(v) for v in value)
        anneal[f.name] = str(value)
    parser["anneal"] = anneal
    run = {}
    for key in RUN_KEYS:
        value = getattr(config, key)
        if value is None or value == ():
            continue
        if isinstance(value, tuple):
            value = ", ".join(value)
        elif isinstance(value, (Strategy, CorpusFormat)):
            value = value.value
        run[key] = str(value)
    parser["run"] = run
    return parser
