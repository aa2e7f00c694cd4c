# -*- coding: utf-8 -*-
"""Test that the search strategies behave as expected on synthetic tasks."""

import numpy as np

from regexanneal.annealer import AnnealConfig, run_psaw, run_psaw_i, run_psaw_p
from regexanneal.constants import PartitionMode
from regexanneal.embeddings import build_fallback_embeddings
from regexanneal.evaluator import Evaluator
from regexanneal.testsuite import BaseTestCase

from . import bimodal_dataset, planted_corpus, require_trend_tests

SEEDS = range(10)


@require_trend_tests
class TestElitism(BaseTestCase):
    def test_best_never_decreases(self):
        corpus = planted_corpus(documents=500)
        dataset = corpus.binary_split("cough_child")
        embeddings = build_fallback_embeddings(corpus)
        for seed in range(50):
            config = AnnealConfig(seed=seed, total_iterations=100, pool_capacity=5)
            history = run_psaw(dataset, embeddings, config).history
            best = [r.best_objective for r in history]
            assert all(a <= b for a, b in zip(best, best[1:])), seed


@require_trend_tests
class TestPoolBenefit(BaseTestCase):
    def test_pool_beats_single_chain(self):
        corpus = planted_corpus()
        dataset = corpus.binary_split("cough_child")
        embeddings = build_fallback_embeddings(corpus)

        def mean_f(pool):
            scores = []
            for seed in SEEDS:
                config = AnnealConfig(seed=seed, total_iterations=300, pool_capacity=pool)
                scores.append(run_psaw(dataset, embeddings, config).metrics.f_beta)
            return float(np.mean(scores))

        single, pooled = mean_f(1), mean_f(10)
        print("mean F0.2 with a pool of 1: %.4f, of 10: %.4f" % (single, pooled))
        assert pooled > single


@require_trend_tests
class TestRecovery(BaseTestCase):
    def test_planted_pattern(self):
        recovered = 0
        for seed in SEEDS:
            corpus = planted_corpus(seed=seed)
            train, test = corpus.train_test_split(0.2, seed)
            embeddings = build_fallback_embeddings(train)
            result = run_psaw(train.binary_split("cough_child"), embeddings, AnnealConfig(seed=seed))
            held_out = Evaluator(test.binary_split("cough_child")).metrics(result.best)
            recovered += held_out.f_beta >= 0.9
        assert recovered >= 8


@require_trend_tests
class TestStrategies(BaseTestCase):
    def setup_method(self):
        super().setup_method()
        self.dataset = bimodal_dataset()
        self.embeddings = build_fallback_embeddings(self.dataset.documents)

    def _config(self, seed):
        return AnnealConfig(seed=seed, total_iterations=300, rules_per_solution=2)

    def test_iterative_recall(self):
        plain = [
            run_psaw(self.dataset, self.embeddings, self._config(s)).metrics.recall
            for s in SEEDS
        ]
        iterative = [
            run_psaw_i(self.dataset, self.embeddings, self._config(s)).metrics.recall
            for s in SEEDS
        ]
        assert np.mean(iterative) >= np.mean(plain)

    def test_parallel_wall_time(self):
        plain = [
            run_psaw(self.dataset, self.embeddings, self._config(s)).wall_time for s in SEEDS
        ]
        parallel = [
            run_psaw_p(
                self.dataset,
                self.embeddings,
                self._config(s).replace(workers=2),
                PartitionMode.kmeans,
            ).wall_time
            for s in SEEDS
        ]
        assert np.mean(parallel) < np.mean(plain)
