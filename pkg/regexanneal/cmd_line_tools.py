# -*- coding: utf-8 -*-
"""Command line tools: train, evaluate and export classifiers.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import argparse
import json
import logging
import os
import re
import sys
from typing import Dict, List, NoReturn, Optional, Sequence

from . import log_to_screen, logger
from .annealer import TrainResult, history_to_lines, train
from .classifier_file import ClassifierFile, read_classifier_file, write_classifier_file
from .config import FALLBACK_EMBEDDINGS, RunConfig, build_run_config, run_config_to_parser
from .constants import CorpusFormat, ExitCode, Strategy
from .corpus import LabeledCorpus, TokenizerConfig, load_corpus, load_stopwords, write_corpus
from .embeddings import EmbeddingTable, build_fallback_embeddings, load_embeddings
from .errors import (
    ClassifierFileError,
    ConfigurationError,
    CorpusFormatError,
    EmbeddingFormatError,
    EmptyCorpusError,
    Error,
    EvaluationError,
    NoDiscriminativeVocabulary,
    SyntheticSpecError,
    UnknownClassError,
)
from .evaluator import (
    EvalMetrics,
    Evaluator,
    format_metrics_table,
    format_summary_table,
    metrics_to_json,
)
from .regex_model import format_classifier
from .synthetic import generate_synthetic_corpus, load_generator_spec
from .util import get_debug_info, read_user_config


class _ArgumentParser(argparse.ArgumentParser):
    """Report invalid flags with the configuration error status."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(ExitCode.config_error, "%s: error: %s\n" % (self.prog, message))


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--verbose",
        "-v",
        action="count",
        default=0,
        help="log progress to stderr, twice for debug messages",
    )


def _add_corpus_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        dest="corpus_format",
        choices=[f.value for f in CorpusFormat],
        default=None,
        help="corpus layout (default: inferred from the extension)",
    )
    parser.add_argument("--tokenizer", default=None, help="tokenizer mode (default: whitespace)")
    parser.add_argument("--stopwords", default=None, help="stop-word list, one word per line")


def _add_train_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", action="append", default=[], help="INI configuration file")
    parser.add_argument("--corpus", default=None, help="training corpus")
    parser.add_argument("--test-corpus", dest="test_corpus", default=None, help="held-out corpus")
    parser.add_argument(
        "--holdout",
        type=float,
        default=None,
        help="fraction of the corpus held out when no test corpus is given",
    )
    parser.add_argument(
        "--class",
        dest="classes",
        action="append",
        default=None,
        help="class to learn, may be repeated (default: every class)",
    )
    parser.add_argument(
        "--embeddings",
        default=None,
        help="word vector file or 'fallback' for vectors built from the corpus",
    )
    parser.add_argument(
        "--strategy", choices=[s.value for s in Strategy], default=None, help="search strategy"
    )
    parser.add_argument("--out", default=None, help="output directory")
    _add_corpus_arguments(parser)

    group = parser.add_argument_group("search parameters")
    group.add_argument("--seed", type=int, default=None)
    group.add_argument("--beta", type=float, default=None, help="F-measure beta (default: 0.2)")
    group.add_argument("--pool", dest="pool_capacity", type=int, default=None, help="(default: 10)")
    group.add_argument(
        "--iterations", dest="total_iterations", type=int, default=None, help="(default: 1000)"
    )
    group.add_argument("--rules", dest="rules_per_solution", type=int, default=None, help="(default: 3)")
    group.add_argument("--t-start", dest="t_start", type=float, default=None, help="(default: 0.5)")
    group.add_argument("--t-end", dest="t_end", type=float, default=None, help="(default: 0.05)")
    group.add_argument("--td-f", dest="td_f", type=float, default=None, help="(default: 5)")
    group.add_argument("--n-w", dest="n_w", type=int, default=None, help="(default: 100)")
    group.add_argument("--td-s", dest="td_s", type=float, default=None, help="(default: 0.75)")
    group.add_argument("--stall-limit", dest="stall_limit", type=int, default=None, help="(default: 200)")
    group.add_argument(
        "--complexity-cap", dest="complexity_cap", type=int, default=None, help="(default: 60)"
    )
    group.add_argument(
        "--keep-negatives",
        dest="filter_negatives",
        action="store_const",
        const=False,
        default=None,
        help="do not remove matched negatives between iterative rules",
    )
    group.add_argument("--workers", type=int, default=None, help="worker processes (default: 1)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="regexanneal", description="RegexAnneal command-line utilities"
    )
    subparsers = parser.add_subparsers(title="command", dest="command")

    p = subparsers.add_parser("train", help="learn classifiers from a labelled corpus")
    _add_common_arguments(p)
    _add_train_arguments(p)

    p = subparsers.add_parser("eval", help="evaluate classifier files on a corpus")
    _add_common_arguments(p)
    p.add_argument("classifiers", nargs="+", help="classifier files")
    p.add_argument("--corpus", required=True, help="labelled corpus")
    p.add_argument("--beta", type=float, default=None, help="(default: value stored in each file)")
    p.add_argument("--json", dest="json_path", default=None, help="write the JSON report there")
    _add_corpus_arguments(p)

    p = subparsers.add_parser("export", help="print the patterns of a classifier file")
    _add_common_arguments(p)
    p.add_argument("classifier", help="classifier file")
    p.add_argument("--dialect", choices=["default"], default="default")

    p = subparsers.add_parser("synth", help="generate a synthetic corpus")
    _add_common_arguments(p)
    p.add_argument("spec", help="generator specification")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="corpus file to write")
    p.add_argument(
        "--format",
        dest="corpus_format",
        choices=[f.value for f in CorpusFormat],
        default=None,
        help="corpus layout (default: inferred from the extension)",
    )

    p = subparsers.add_parser("info", help="print information to diagnose RegexAnneal")
    _add_common_arguments(p)

    return parser


def _safe_name(name: str) -> str:
    """File name stem for a class."""
    return re.sub(r"[^\w.-]", "_", name) or "_"


def _tokenizer_config(mode: Optional[str], stopwords: Optional[str]) -> TokenizerConfig:
    return TokenizerConfig(
        mode or "whitespace",
        load_stopwords(stopwords) if stopwords else frozenset(),
    )


def _load_embeddings(config: RunConfig, corpus: LabeledCorpus) -> EmbeddingTable:
    if config.embeddings == FALLBACK_EMBEDDINGS:
        logger.info("Building word vectors from the training corpus")
        return build_fallback_embeddings(corpus)
    return load_embeddings(config.embeddings)


def _write_artifacts(
    out: str,
    name: str,
    record: ClassifierFile,
    result: TrainResult,
    test: Optional[EvalMetrics],
) -> None:
    stem = os.path.join(out, _safe_name(name))
    write_classifier_file(record, stem + ".classifier.ini")
    with open(stem + ".patterns.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write(format_classifier(record.classifier) + "\n")
    metrics = {"train": result.metrics.to_dict()}
    if test is not None:
        metrics["test"] = test.to_dict()
    with open(stem + ".metrics.json", "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(metrics, indent=2, sort_keys=True) + "\n")
    with open(stem + ".history.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for line in history_to_lines(result.history):
            f.write(line + "\n")


def cmd_train(config: RunConfig) -> int:
    """Learn one classifier per requested class and write its artifacts.

    For each class ``<out>/<class>.classifier.ini``,
    ``<class>.patterns.txt``, ``<class>.metrics.json`` and
    ``<class>.history.jsonl`` are written.

    """
    if not config.corpus:
        raise ConfigurationError("no training corpus given")
    tokenizer = _tokenizer_config(config.tokenizer, config.stopwords)
    corpus = load_corpus(config.corpus, config.corpus_format, tokenizer)
    test_corpus: Optional[LabeledCorpus] = None
    if config.test_corpus:
        test_corpus = load_corpus(config.test_corpus, config.corpus_format, tokenizer)
    elif config.holdout:
        corpus, test_corpus = corpus.train_test_split(config.holdout, config.anneal.seed)

    classes = config.classes or tuple(sorted(corpus.classes))
    datasets = {name: corpus.binary_split(name) for name in classes}
    embeddings = _load_embeddings(config, corpus)

    os.makedirs(config.out, exist_ok=True)
    with open(os.path.join(config.out, "run.ini"), "w", encoding="utf-8", newline="\n") as f:
        run_config_to_parser(config).write(f)

    train_metrics: Dict[str, EvalMetrics] = {}
    failed: List[str] = []
    for name, dataset in datasets.items():
        logger.info("Training class %r with %s", name, config.strategy.value)
        try:
            result = train(dataset, embeddings, config.anneal, config.strategy)
        except NoDiscriminativeVocabulary as e:
            logger.error("%s", e)
            failed.append(name)
            continue
        logger.info("Class %r trained in %.1f s", name, result.wall_time)

        test: Optional[EvalMetrics] = None
        if test_corpus is not None:
            if name in {d.label for d in test_corpus}:
                test = Evaluator(test_corpus.binary_split(name), config.anneal.beta).metrics(
                    result.best
                )
            else:
                logger.warning("Class %r has no test document", name)

        record = ClassifierFile(
            result.best, name, config.anneal.beta, config.anneal.seed, config.strategy
        )
        _write_artifacts(config.out, name, record, result, test)
        train_metrics[name] = result.metrics

    if train_metrics:
        print(format_metrics_table(train_metrics))
    if failed:
        print(
            "No discriminative vocabulary for: %s" % ", ".join(failed), file=sys.stderr
        )
        return ExitCode.training_failure
    return ExitCode.success


def cmd_eval(
    classifier_paths: Sequence[str],
    corpus_path: str,
    beta: Optional[float] = None,
    corpus_format: Optional[str] = None,
    tokenizer: Optional[TokenizerConfig] = None,
    json_path: Optional[str] = None,
) -> int:
    """Print per-class metrics and their deciles for classifier files."""
    corpus = load_corpus(corpus_path, corpus_format, tokenizer)
    metrics: Dict[str, EvalMetrics] = {}
    for path in classifier_paths:
        record = read_classifier_file(path)
        if record.target_class in metrics:
            logger.warning(
                "%s: class %r already evaluated, keeping the last file",
                path,
                record.target_class,
            )
        dataset = corpus.binary_split(record.target_class)
        evaluator = Evaluator(dataset, record.beta if beta is None else beta)
        metrics[record.target_class] = evaluator.metrics(record.classifier)

    print(format_metrics_table(metrics))
    print(
        format_summary_table(
            {
                key: [getattr(m, key) for m in metrics.values()]
                for key in ("precision", "recall", "f_beta")
            }
        )
    )
    report = metrics_to_json(metrics)
    if json_path:
        with open(json_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(report + "\n")
    return ExitCode.success


def cmd_export(classifier_path: str, dialect: str = "default") -> int:
    """Print the patterns of each rule and how they combine."""
    if dialect != "default":
        raise ConfigurationError("unknown dialect %r" % dialect)
    record = read_classifier_file(classifier_path)
    print("class: %s" % record.target_class)
    print(format_classifier(record.classifier))
    return ExitCode.success


def cmd_synth(
    spec_path: str, seed: int, out: str, corpus_format: Optional[str] = None
) -> int:
    spec = load_generator_spec(spec_path)
    corpus = generate_synthetic_corpus(spec, seed)
    write_corpus(corpus, out, corpus_format)
    logger.info("%d documents written to %s", len(corpus), out)
    return ExitCode.success


def cmd_info() -> int:
    get_debug_info()
    return ExitCode.success


#: Exit status of each family of errors, checked in order.
_ERROR_STATUS = (
    ((ConfigurationError, SyntheticSpecError), ExitCode.config_error),
    ((NoDiscriminativeVocabulary,), ExitCode.training_failure),
    (
        (
            CorpusFormatError,
            EmptyCorpusError,
            UnknownClassError,
            EmbeddingFormatError,
            ClassifierFileError,
            EvaluationError,
            OSError,
            ValueError,
        ),
        ExitCode.data_error,
    ),
)


def exit_code_for(error: BaseException) -> ExitCode:
    for types, status in _ERROR_STATUS:
        if isinstance(error, types):
            return status
    raise error


def regexanneal_main(
    argv: Optional[Sequence[str]] = None, command: Optional[str] = None
) -> int:
    """Run the main entry point for command line tools.

    Parameters
    ----------
    argv : Sequence[str], optional
        Arguments, read from the command line if None.
    command : str, optional
        Command to invoke, prepended to the arguments when given.

    Returns
    -------
    int
        Exit status, see ExitCode.

    """
    arguments = list(sys.argv[1:] if argv is None else argv)
    if command:
        arguments.insert(0, command)
    parser = _build_parser()
    args = parser.parse_args(arguments)
    if args.command is None:
        parser.print_help()
        return ExitCode.config_error

    if args.verbose:
        log_to_screen(logging.DEBUG if args.verbose > 1 else logging.INFO)

    try:
        if args.command == "train":
            config = build_run_config(read_user_config(args.config), args)
            return cmd_train(config)
        elif args.command == "eval":
            tokenizer = _tokenizer_config(args.tokenizer, args.stopwords)
            return cmd_eval(
                args.classifiers,
                args.corpus,
                args.beta,
                args.corpus_format,
                tokenizer,
                args.json_path,
            )
        elif args.command == "export":
            return cmd_export(args.classifier, args.dialect)
        elif args.command == "synth":
            return cmd_synth(args.spec, args.seed, args.out, args.corpus_format)
        elif args.command == "info":
            return cmd_info()
        raise ValueError(
            f"Unknown command {args.command}. Valid values are: train, eval, "
            "export, synth and info"
        )
    except (Error, OSError, ValueError) as e:
        status = exit_code_for(e)
        print("regexanneal: error: %s" % e, file=sys.stderr)
        return status


def main() -> None:
    """Run the RegexAnneal CLI program."""
    sys.exit(regexanneal_main())


def info_main() -> None:
    """Summarize the infos about RegexAnneal."""
    sys.exit(regexanneal_main(command="info"))
