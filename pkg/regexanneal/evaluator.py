# -*- coding: utf-8 -*-
"""Precision, recall and F-measure of classifiers on binary datasets.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import json
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from prettytable import PrettyTable

from .constants import DEFAULT_BETA
from .corpus import BinaryDataset, InvertedIndex
from .errors import EvaluationError
from .regex_model import Classifier, RegexRule, atom_words, match_classifier, match_rule


@dataclass(frozen=True)
class ConfusionCounts:
    """Matched documents of each side of a binary dataset."""

    #: Matched positive documents.
    true_matches: int

    #: Matched negative documents.
    false_matches: int

    #: Number of positive documents.
    positives_total: int

    def __post_init__(self) -> None:
        if min(self.true_matches, self.false_matches, self.positives_total) < 0:
            raise ValueError("counts must be non negative")
        if self.true_matches > self.positives_total:
            raise ValueError("more true matches than positive documents")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.true_matches + other.true_matches,
            self.false_matches + other.false_matches,
            self.positives_total + other.positives_total,
        )


@dataclass(frozen=True)
class EvalMetrics:
    counts: ConfusionCounts
    precision: float
    recall: float
    f_beta: float
    beta: float

    def to_dict(self) -> Dict[str, Union[int, float]]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f_beta": self.f_beta,
            "beta": self.beta,
            "true_matches": self.counts.true_matches,
            "false_matches": self.counts.false_matches,
            "positives_total": self.counts.positives_total,
        }


def metrics_from_counts(counts: ConfusionCounts, beta: float) -> EvalMetrics:
    """Precision, recall and F-measure of confusion counts.

    Precision without any match and an F-measure with null precision and
    recall are both 0.

    Raises
    ------
    EvaluationError
        Raised if beta is negative or if there is no positive document.

    """
    if beta < 0:
        raise EvaluationError("beta must be non negative, got %r" % beta)
    if counts.positives_total == 0:
        raise EvaluationError("metrics need at least one positive document")

    matched = counts.true_matches + counts.false_matches
    precision = counts.true_matches / matched if matched else 0.0
    recall = counts.true_matches / counts.positives_total
    b2 = beta * beta
    denominator = b2 * precision + recall
    f_beta = (1 + b2) * precision * recall / denominator if denominator > 0 else 0.0
    return EvalMetrics(counts, precision, recall, f_beta, beta)


class Evaluator:
    """Evaluate rules on a dataset, caching the documents matched by each rule.

    Documents are confirmed with match_rule after an inverted index
    prefilter: a document is a candidate for a chain when it contains a word
    of every element. Words missing from the index are scanned on first use.

    An evaluator holds mutable caches and is meant to be used by one search
    at a time.

    """

    def __init__(
        self,
        dataset: BinaryDataset,
        beta: float = DEFAULT_BETA,
        index: Optional[InvertedIndex] = None,
        use_index: bool = True,
        cache_size: int = 4096,
    ) -> None:
        if beta < 0:
            raise EvaluationError("beta must be non negative, got %r" % beta)
        self.dataset = dataset
        self.beta = beta
        self.use_index = use_index
        self.cache_size = cache_size

        documents = dataset.documents
        self._texts = [d.text for d in documents]
        self._n_positive = len(dataset.positive)
        self._word_masks: Dict[str, np.ndarray] = {}
        if index is not None:
            position = {d.id: i for i, d in enumerate(documents)}
            for word, ids in index.postings.items():
                mask = np.zeros(len(documents), dtype=bool)
                mask[[position[i] for i in ids if i in position]] = True
                self._word_masks[word] = mask
        self._rule_masks: "OrderedDict[RegexRule, np.ndarray]" = OrderedDict()

        #: Number of rule evaluations not served by the cache.
        self.misses = 0

    def __len__(self) -> int:
        return len(self._texts)

    def word_mask(self, word: str) -> np.ndarray:
        mask = self._word_masks.get(word)
        if mask is None:
            mask = np.fromiter((word in t for t in self._texts), dtype=bool, count=len(self._texts))
            self._word_masks[word] = mask
        return mask

    def candidates(self, rule: RegexRule) -> np.ndarray:
        """Superset of the documents matched by the rule."""
        result = np.zeros(len(self._texts), dtype=bool)
        for chain in rule.positive:
            chain_mask = np.ones(len(self._texts), dtype=bool)
            for element in chain.elements:
                element_mask = np.zeros(len(self._texts), dtype=bool)
                for word in atom_words(element):
                    element_mask |= self.word_mask(word)
                chain_mask &= element_mask
            result |= chain_mask
        return result

    def rule_mask(self, rule: RegexRule) -> np.ndarray:
        """Boolean vector of the documents matched by the rule, positives first."""
        mask = self._rule_masks.get(rule)
        if mask is not None:
            self._rule_masks.move_to_end(rule)
            return mask

        self.misses += 1
        if self.use_index:
            candidates = np.flatnonzero(self.candidates(rule))
        else:
            candidates = np.arange(len(self._texts))
        mask = np.zeros(len(self._texts), dtype=bool)
        for i in candidates:
            mask[i] = match_rule(rule, self._texts[i])
        mask.setflags(write=False)

        self._rule_masks[rule] = mask
        if len(self._rule_masks) > self.cache_size:
            self._rule_masks.popitem(last=False)
        return mask

    def classifier_mask(self, classifier: Classifier) -> np.ndarray:
        mask = np.zeros(len(self._texts), dtype=bool)
        for rule in classifier.rules:
            mask |= self.rule_mask(rule)
        return mask

    def counts_from_mask(self, mask: np.ndarray) -> ConfusionCounts:
        return ConfusionCounts(
            int(mask[: self._n_positive].sum()),
            int(mask[self._n_positive :].sum()),
            self._n_positive,
        )

    def counts(self, classifier: Classifier) -> ConfusionCounts:
        return self.counts_from_mask(self.classifier_mask(classifier))

    def metrics(self, classifier: Classifier) -> EvalMetrics:
        return metrics_from_counts(self.counts(classifier), self.beta)

    def objective(self, classifier: Classifier) -> float:
        return self.metrics(classifier).f_beta


def confusion_counts(
    classifier: Classifier,
    dataset: BinaryDataset,
    index: Optional[InvertedIndex] = None,
) -> ConfusionCounts:
    """Count matched positives and negatives.

    Without an index every document is scanned. With an index, only the
    prefiltered candidates are confirmed; the counts are the same.

    """
    if index is not None:
        return Evaluator(dataset, index=index).counts(classifier)
    return ConfusionCounts(
        sum(match_classifier(classifier, d.text) for d in dataset.positive),
        sum(match_classifier(classifier, d.text) for d in dataset.negative),
        len(dataset.positive),
    )


def objective(
    classifier: Classifier, dataset: BinaryDataset, beta: float = DEFAULT_BETA
) -> float:
    """F-measure maximized by the search."""
    return metrics_from_counts(confusion_counts(classifier, dataset), beta).f_beta


#: Quantile levels reported by distribution_summary.
DECILES = tuple(range(0, 101, 10))


def distribution_summary(values: Iterable[float]) -> Dict[str, float]:
    """Deciles of a set of values, keyed ``p0`` to ``p100``."""
    data = np.asarray(list(values), dtype=np.float64)
    if not data.size:
        return {}
    quantiles = np.quantile(data, [d / 100 for d in DECILES])
    return {"p%d" % d: float(q) for d, q in zip(DECILES, quantiles)}


def format_metrics_table(metrics: Mapping[str, EvalMetrics]) -> str:
    """One row per class, sorted by class name."""
    p = PrettyTable(
        ("class", "precision", "recall", "f_beta", "matched +", "matched -", "positives")
    )
    for name, m in metrics.items():
        p.add_row(
            (
                name,
                "%.4f" % m.precision,
                "%.4f" % m.recall,
                "%.4f" % m.f_beta,
                m.counts.true_matches,
                m.counts.false_matches,
                m.counts.positives_total,
            )
        )
    return p.get_string(sortby="class")


def format_summary_table(columns: Mapping[str, Sequence[float]]) -> str:
    """Deciles of each named series, one row per decile."""
    summaries = {name: distribution_summary(values) for name, values in columns.items()}
    p = PrettyTable(("quantile",) + tuple(columns))
    for d in DECILES:
        key = "p%d" % d
        p.add_row((key,) + tuple("%.4f" % summaries[n].get(key, 0.0) for n in columns))
    return p.get_string()


def metrics_to_json(metrics: Mapping[str, EvalMetrics]) -> str:
    """Machine readable report with per class metrics and their deciles."""
    report = {
        "classes": {name: metrics[name].to_dict() for name in sorted(metrics)},
        "summary": {
            key: distribution_summary(getattr(m, key) for m in metrics.values())
            for key in ("precision", "recall", "f_beta")
        },
    }
    return json.dumps(report, indent=2, sort_keys=True)
