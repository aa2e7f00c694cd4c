# -*- coding: utf-8 -*-
"""Test the assembly of run configurations."""

import argparse
import textwrap
from configparser import ConfigParser

import pytest

from regexanneal.annealer import AnnealConfig
from regexanneal.config import (
    ANNEAL_KEYS,
    RunConfig,
    build_run_config,
    run_config_to_parser,
)
from regexanneal.constants import CorpusFormat, Strategy
from regexanneal.errors import ConfigurationError
from regexanneal.testsuite import BaseTestCase


def _parser(text):
    parser = ConfigParser(interpolation=None)
    parser.read_string(textwrap.dedent(text))
    return parser


def _namespace(**values):
    flags = dict.fromkeys(ANNEAL_KEYS)
    flags.update(corpus=None, strategy=None, classes=None, out=None)
    flags.update(values)
    return argparse.Namespace(**flags)


class TestBuildRunConfig(BaseTestCase):
    def test_defaults(self):
        config = build_run_config(ConfigParser())
        assert config == RunConfig()
        assert config.anneal == AnnealConfig()

    def test_sections(self):
        config = build_run_config(
            _parser(
                """
                [anneal]
                pool_capacity = 4
                distance_table = 0, 5, 10
                filter_negatives = no

                [run]
                corpus = train.tsv
                classes = cough, rash
                strategy = psaw-i
                corpus_format = jsonl
                """
            )
        )
        assert config.anneal.pool_capacity == 4
        assert config.anneal.distance_table == (0, 5, 10)
        assert config.anneal.filter_negatives is False
        assert config.corpus == "train.tsv"
        assert config.classes == ("cough", "rash")
        assert config.strategy is Strategy.psaw_i
        assert config.corpus_format is CorpusFormat.jsonl

    def test_flags_override(self):
        parser = _parser("[anneal]\npool_capacity = 4\nseed = 3\n[run]\nstrategy = psaw-i\n")
        config = build_run_config(parser, _namespace(pool_capacity=7, strategy="psaw"))
        assert config.anneal.pool_capacity == 7
        assert config.anneal.seed == 3
        assert config.strategy is Strategy.psaw

    @pytest.mark.parametrize(
        "text, message",
        [
            ("[anneal]\npool = 4\n", "Valid keys"),
            ("[run]\nworkers = 4\n", "unknown key 'workers'"),
            ("[anneal]\npool_capacity = four\n", "[anneal] pool_capacity"),
            ("[anneal]\nfilter_negatives = maybe\n", "not a boolean"),
            ("[anneal]\nt_start = 0.01\n", "t_end < t_start"),
            ("[run]\nstrategy = greedy\n", "greedy"),
            ("[run]\nholdout = 0.2\ntest_corpus = t.tsv\n", "exclusive"),
            ("[run]\nholdout = 1\n", "holdout"),
            ("[anneal]\nrules_per_solution = 1\n[run]\nstrategy = psaw-p-kmeans\n", "2 rules"),
        ],
    )
    def test_invalid(self, text, message):
        with pytest.raises(ConfigurationError) as e:
            build_run_config(_parser(text))
        assert message in str(e.value)


class TestRunConfigToParser(BaseTestCase):
    def test_read_back(self):
        config = RunConfig(
            anneal=AnnealConfig(seed=5, distance_table=(0, 10), filter_negatives=False),
            corpus="train.tsv",
            classes=("cough", "rash"),
            strategy=Strategy.psaw_p_random,
            corpus_format=CorpusFormat.tsv,
            out="models",
            holdout=0.2,
        )
        assert build_run_config(run_config_to_parser(config)) == config

    def test_workers_left_out(self):
        config = RunConfig(anneal=AnnealConfig(workers=4))
        parser = run_config_to_parser(config)
        assert "workers" not in parser["anneal"]
        assert "corpus" not in parser["run"]
        assert parser["anneal"]["distance_table"].startswith("0, 2, 4")
