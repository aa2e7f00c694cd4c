# -*- coding: utf-8 -*-
"""Pool based simulated annealing search of regular-expression classifiers.

An elite pool of solutions is kept. At each round every elite produces a
neighbour, each neighbour competes against a random elite under the
Metropolis criterion, then the best solution found so far rejoins the pool
which is trimmed back to its capacity.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import logger
from .constants import (
    DEFAULT_BETA,
    DEFAULT_COMPLEXITY_CAP,
    DEFAULT_DISTANCE_TABLE,
    DEFAULT_N_W,
    DEFAULT_POOL_CAPACITY,
    DEFAULT_RULES_PER_SOLUTION,
    DEFAULT_STALL_LIMIT,
    DEFAULT_T_END,
    DEFAULT_T_START,
    DEFAULT_TD_F,
    DEFAULT_TD_S,
    DEFAULT_TOTAL_ITERATIONS,
    KMEANS_MAX_ITERATIONS,
    KMEANS_RESTARTS,
    MIN_CLUSTER_SIZE,
    TD_F_HALVINGS,
    PartitionMode,
    Strategy,
)
from .corpus import (
    BinaryDataset,
    Document,
    ratio_keywords,
    ratio_ranking,
    word_frequencies,
)
from .embeddings import EmbeddingTable, document_vector, similarity_matrix
from .errors import ConfigurationError, MutationError, NoDiscriminativeVocabulary
from .evaluator import EvalMetrics, Evaluator
from .operators import MutationContext, mutate_with_record
from .regex_model import Chain, Classifier, RegexRule, make_atom, match_rule
from .typing import RandomStream
from .util import derive_seeds


@dataclass(frozen=True)
class AnnealConfig:
    """Parameters of a search."""

    t_start: float = DEFAULT_T_START
    t_end: float = DEFAULT_T_END
    pool_capacity: int = DEFAULT_POOL_CAPACITY
    total_iterations: int = DEFAULT_TOTAL_ITERATIONS
    beta: float = DEFAULT_BETA
    rules_per_solution: int = DEFAULT_RULES_PER_SOLUTION
    td_f: float = DEFAULT_TD_F
    n_w: int = DEFAULT_N_W
    td_s: float = DEFAULT_TD_S
    stall_limit: int = DEFAULT_STALL_LIMIT
    seed: int = 0
    distance_table: Tuple[int, ...] = DEFAULT_DISTANCE_TABLE
    complexity_cap: int = DEFAULT_COMPLEXITY_CAP
    positive_part_probability: float = 0.5

    #: Remove the matched negatives too between the rules of the iterative search.
    filter_negatives: bool = True

    #: Processes used by the parallel strategy.
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "distance_table", tuple(self.distance_table))
        if not 0 < self.t_end < self.t_start:
            raise ConfigurationError("temperatures must satisfy 0 < t_end < t_start")
        if self.pool_capacity < 1:
            raise ConfigurationError("pool_capacity must be at least 1")
        if self.total_iterations < 0:
            raise ConfigurationError("total_iterations must be non negative")
        if self.beta < 0:
            raise ConfigurationError("beta must be non negative")
        if self.rules_per_solution < 1:
            raise ConfigurationError("rules_per_solution must be at least 1")
        if self.td_f <= 0:
            raise ConfigurationError("td_f must be positive")
        if self.n_w < 1:
            raise ConfigurationError("n_w must be at least 1")
        if not -1 <= self.td_s <= 1:
            raise ConfigurationError("td_s must lie in [-1, 1]")
        if self.stall_limit < 1:
            raise ConfigurationError("stall_limit must be at least 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")

    def replace(self, **changes: Any) -> "AnnealConfig":
        return dataclasses.replace(self, **changes)


class ScoredSolution(NamedTuple):
    classifier: Classifier
    objective: float
    complexity: int


@dataclass
class PoolState:
    elites: List[ScoredSolution]
    neighbours: List[ScoredSolution]
    best: ScoredSolution
    temperature: float
    iteration: int = 0

    #: Neighbours accepted during the last round.
    accepted: int = 0


class RoundRecord(NamedTuple):
    """State of a search after one replacement round."""

    #: Index of the rule learned by a multi stage strategy, 0 otherwise.
    stage: int
    round: int
    temperature: float
    best_objective: float
    mean_elite_objective: float
    accepted: int


@dataclass
class TrainResult:
    best: Classifier
    metrics: EvalMetrics
    history: List[RoundRecord] = field(default_factory=list)

    #: Seconds spent in the search.
    wall_time: float = 0.0

    strategy: Strategy = Strategy.psaw

    @property
    def objective(self) -> float:
        return self.metrics.f_beta


def temperature_at(k: int, config: AnnealConfig) -> float:
    """Geometric cooling from t_start at round 0 to t_end at the last round."""
    total = config.total_iterations
    if not 0 <= k <= max(total, 0):
        raise ValueError("round %d outside [0, %d]" % (k, total))
    if k == 0 or total == 0:
        return config.t_start
    if k == total:
        return config.t_end
    return config.t_start * (config.t_end / config.t_start) ** (k / total)


def metropolis_accept(delta: float, temperature: float, rng: RandomStream) -> bool:
    """Accept improvements, and degradations with probability exp(delta / T)."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if delta >= 0:
        return True
    return bool(rng.random() < math.exp(delta / temperature))


def _solution_order(solutions: Sequence[ScoredSolution]) -> List[int]:
    return sorted(
        range(len(solutions)),
        key=lambda i: (-solutions[i].objective, solutions[i].complexity, i),
    )


def score(classifier: Classifier, evaluator: Evaluator) -> ScoredSolution:
    return ScoredSolution(
        classifier, evaluator.objective(classifier), classifier.complexity
    )


def _neighbour(
    solution: ScoredSolution,
    ctx: MutationContext,
    evaluator: Evaluator,
    rng: RandomStream,
) -> ScoredSolution:
    try:
        classifier, record = mutate_with_record(solution.classifier, ctx, rng)
    except MutationError as e:
        logger.debug("Keeping a solution unchanged: %s", e)
        return solution
    neighbour = score(classifier, evaluator)
    ctx.selector.feedback(record.operator, neighbour.objective > solution.objective)
    return neighbour


def replacement_round(
    state: PoolState,
    ctx: MutationContext,
    evaluator: Evaluator,
    config: AnnealConfig,
    rng: RandomStream,
) -> PoolState:
    """Run one round of neighbour generation, replacement and elitist sort."""
    k = state.iteration + 1
    temperature = temperature_at(k, config)

    neighbours = [_neighbour(e, ctx, evaluator, rng) for e in state.elites]

    elites = list(state.elites)
    accepted = 0
    for neighbour in neighbours:
        j = int(rng.integers(len(elites)))
        if metropolis_accept(neighbour.objective - elites[j].objective, temperature, rng):
            elites[j] = neighbour
            accepted += 1

    candidates = elites + [state.best]
    order = _solution_order(candidates)[: config.pool_capacity]
    elites = [candidates[i] for i in order]
    return PoolState(elites, neighbours, elites[0], temperature, k, accepted)


def subject_groups(
    keywords: Sequence[str],
    embeddings: Optional[EmbeddingTable],
    td_s: float,
) -> List[Tuple[str, ...]]:
    """Group keywords linked by a chain of similarities above td_s.

    Groups and their members keep the order of the keywords. Words without a
    vector form their own group.

    """
    parent = list(range(len(keywords)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if embeddings is not None:
        known = [i for i, w in enumerate(keywords) if w in embeddings]
        sims = similarity_matrix(embeddings, [keywords[i] for i in known])
        for a, b in zip(*np.nonzero(np.triu(sims > td_s, k=1))):
            ra, rb = find(known[a]), find(known[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups: dict = {}
    for i, word in enumerate(keywords):
        groups.setdefault(find(i), []).append(word)
    return [tuple(g) for g in groups.values()]


def build_initial_solution(
    dataset: BinaryDataset,
    embeddings: Optional[EmbeddingTable],
    config: AnnealConfig,
    rng: RandomStream,
) -> Classifier:
    """Classifier whose rules each hold one group of subject words.

    Keywords are the words more frequent in the positive documents than
    td_f times their frequency in the negative ones. When there is none, td_f
    is halved a few times before giving up.

    Raises
    ------
    NoDiscriminativeVocabulary
        Raised if no keyword is found.

    """
    positive = word_frequencies(dataset.positive)
    negative = word_frequencies(dataset.negative)
    td_f = config.td_f
    for attempt in range(TD_F_HALVINGS + 1):
        keywords = ratio_keywords(positive, negative, td_f)
        if keywords:
            break
        if attempt == TD_F_HALVINGS:
            raise NoDiscriminativeVocabulary(dataset.target_class)
        logger.warning(
            "No keyword for class %r with td_f=%g, trying %g",
            dataset.target_class,
            td_f,
            td_f / 2,
        )
        td_f /= 2

    groups = subject_groups(keywords[: config.n_w], embeddings, config.td_s)
    logger.debug(
        "Class %r: %d keywords in %d groups", dataset.target_class, len(keywords), len(groups)
    )
    rules = []
    for _ in range(config.rules_per_solution):
        group = groups[int(rng.integers(len(groups)))]
        rules.append(RegexRule.from_chains([Chain((make_atom(group),))]))
    return Classifier(tuple(rules))


def build_mutation_context(
    dataset: BinaryDataset,
    embeddings: Optional[EmbeddingTable],
    config: AnnealConfig,
) -> MutationContext:
    """Word pools ranked by frequency ratio in each direction."""
    positive = word_frequencies(dataset.positive)
    negative = word_frequencies(dataset.negative)
    positive_words = ratio_ranking(positive, negative, config.n_w)
    if not positive_words:
        raise NoDiscriminativeVocabulary(dataset.target_class)
    return MutationContext(
        positive_words=tuple(positive_words),
        negative_words=tuple(ratio_ranking(negative, positive, config.n_w)),
        distance_table=config.distance_table,
        embeddings=embeddings,
        complexity_cap=config.complexity_cap,
        positive_part_probability=config.positive_part_probability,
    )


def initial_pool(
    initial: Classifier,
    ctx: MutationContext,
    evaluator: Evaluator,
    config: AnnealConfig,
    rng: RandomStream,
) -> PoolState:
    """Pool of one-mutation variants of the initial solution."""
    start = score(initial, evaluator)
    elites = [_neighbour(start, ctx, evaluator, rng) for _ in range(config.pool_capacity)]
    elites = [elites[i] for i in _solution_order(elites)]
    return PoolState(elites, [], elites[0], temperature_at(0, config))


def run_psaw(
    dataset: BinaryDataset,
    embeddings: Optional[EmbeddingTable],
    config: AnnealConfig,
    stage: int = 0,
) -> TrainResult:
    """Learn a classifier of config.rules_per_solution rules.

    Rounds stop after config.total_iterations or when the best solution has
    not improved for config.stall_limit rounds.

    """
    started = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    evaluator = Evaluator(dataset, beta=config.beta)
    ctx = build_mutation_context(dataset, embeddings, config)
    initial = build_initial_solution(dataset, embeddings, config, rng)
    state = initial_pool(initial, ctx, evaluator, config, rng)

    history: List[RoundRecord] = []
    stalled = 0
    while state.iteration < config.total_iterations:
        previous = state.best.objective
        state = replacement_round(state, ctx, evaluator, config, rng)
        history.append(
            RoundRecord(
                stage,
                state.iteration,
                state.temperature,
                state.best.objective,
                float(np.mean([e.objective for e in state.elites])),
                state.accepted,
            )
        )
        stalled = 0 if state.best.objective > previous else stalled + 1
        if stalled >= config.stall_limit:
            logger.info(
                "Class %r: no improvement in %d rounds, stopping at round %d",
                dataset.target_class,
                stalled,
                state.iteration,
            )
            break

    logger.debug(
        "Class %r: best objective %.4f after %d rounds (%d evaluations)",
        dataset.target_class,
        state.best.objective,
        state.iteration,
        evaluator.misses,
    )
    return TrainResult(
        state.best.classifier,
        evaluator.metrics(state.best.classifier),
        history,
        time.perf_counter() - started,
        Strategy.psaw,
    )


def run_psaw_i(
    dataset: BinaryDataset,
    embeddings: Optional[EmbeddingTable],
    config: AnnealConfig,
) -> TrainResult:
    """Learn the rules one at a time, each on the documents left unmatched."""
    started = time.perf_counter()
    seeds = derive_seeds(config.seed, config.rules_per_solution)
    positive = list(dataset.positive)
    negative = list(dataset.negative)
    rules: List[RegexRule] = []
    history: List[RoundRecord] = []

    for stage, seed in enumerate(seeds):
        if not positive:
            logger.info(
                "Class %r: every positive is matched after %d rules",
                dataset.target_class,
                len(rules),
            )
            break
        working = BinaryDataset(positive, negative, dataset.target_class)
        stage_config = config.replace(rules_per_solution=1, seed=seed)
        try:
            result = run_psaw(working, embeddings, stage_config, stage=stage)
        except NoDiscriminativeVocabulary:
            if not rules:
                raise
            logger.info(
                "Class %r: remaining positives have no keyword, stopping with %d rules",
                dataset.target_class,
                len(rules),
            )
            break

        rule = result.best.rules[0]
        rules.append(rule)
        history.extend(result.history)
        positive = [d for d in positive if not match_rule(rule, d.text)]
        if config.filter_negatives:
            negative = [d for d in negative if not match_rule(rule, d.text)]
        logger.info(
            "Class %r: rule %d learned, %d positives and %d negatives left",
            dataset.target_class,
            stage + 1,
            len(positive),
            len(negative),
        )

    classifier = Classifier(tuple(rules))
    metrics = Evaluator(dataset, beta=config.beta).metrics(classifier)
    return TrainResult(
        classifier, metrics, history, time.perf_counter() - started, Strategy.psaw_i
    )


def _kmeans(points: np.ndarray, k: int, rng: RandomStream) -> np.ndarray:
    """Cluster labels of the restart with the lowest inertia.

    Each restart seeds its centers from a random point followed by the
    farthest points, then runs Lloyd iterations. An emptied cluster takes a
    random point as its center.

    """
    n = len(points)
    if k <= 1:
        return np.zeros(n, dtype=int)

    best_labels = np.zeros(n, dtype=int)
    best_inertia = float("inf")
    for _ in range(KMEANS_RESTARTS):
        centers = [points[int(rng.integers(n))]]
        for _ in range(1, k):
            distances = np.min(
                np.linalg.norm(points[:, None, :] - np.array(centers)[None, :, :], axis=2),
                axis=1,
            )
            centers.append(points[int(np.argmax(distances))])
        center_array = np.array(centers)

        labels = np.zeros(n, dtype=int)
        for iteration in range(KMEANS_MAX_ITERATIONS):
            distances = np.linalg.norm(points[:, None, :] - center_array[None, :, :], axis=2)
            new_labels = np.argmin(distances, axis=1)
            if iteration and np.array_equal(new_labels, labels):
                break
            labels = new_labels
            for c in range(k):
                members = points[labels == c]
                if len(members):
                    center_array[c] = members.mean(axis=0)
                else:
                    center_array[c] = points[int(rng.integers(n))]

        inertia = float(np.sum((points - center_array[labels]) ** 2))
        if inertia < best_inertia:
            best_inertia = inertia
            best_labels = labels.copy()
    return best_labels


def _merge_small_parts(
    parts: List[List[int]], points: Optional[np.ndarray]
) -> List[List[int]]:
    parts = [p for p in parts if p]
    while len(parts) > 1:
        sizes = [len(p) for p in parts]
        smallest = int(np.argmin(sizes))
        if sizes[smallest] >= MIN_CLUSTER_SIZE:
            break
        others = [i for i in range(len(parts)) if i != smallest]
        if points is None:
            target = smallest + 1 if smallest + 1 < len(parts) else smallest - 1
        else:
            center = points[parts[smallest]].mean(axis=0)
            target = min(
                others,
                key=lambda i: float(np.linalg.norm(points[parts[i]].mean(axis=0) - center)),
            )
        logger.warning(
            "Merging a part of %d positives into a part of %d positives",
            sizes[smallest],
            sizes[target],
        )
        parts[target] = sorted(parts[target] + parts[smallest])
        del parts[smallest]
    return parts


def partition_positives(
    positives: Sequence[Document],
    embeddings: Optional[EmbeddingTable],
    parts: int,
    mode: PartitionMode,
    rng: RandomStream,
) -> List[List[Document]]:
    """Divide the positive documents in at most ``parts`` groups.

    Groups are formed by k-means over the mean word vectors of the documents
    or uniformly at random. Groups of fewer than MIN_CLUSTER_SIZE documents
    are merged into the nearest one. Documents keep their order inside a
    group and groups are ordered by their first document.

    """
    mode = PartitionMode(mode)
    n = len(positives)
    if mode is PartitionMode.kmeans:
        if embeddings is None:
            raise ConfigurationError("k-means partitioning needs word vectors")
        points: Optional[np.ndarray] = np.array(
            [document_vector(embeddings, d).vector for d in positives]
        )
        labels = _kmeans(points, min(parts, n), rng)  # type: ignore[arg-type]
        groups = [
            [i for i in range(n) if labels[i] == c] for c in range(min(parts, n))
        ]
    else:
        points = None
        groups = [sorted(int(i) for i in chunk) for chunk in np.array_split(rng.permutation(n), parts)]

    groups = _merge_small_parts(groups, points)
    groups.sort(key=lambda g: g[0])
    logger.info("Positives divided in parts of sizes %s", [len(g) for g in groups])
    return [[positives[i] for i in g] for g in groups]


def _run_part(
    task: Tuple[BinaryDataset, Optional[EmbeddingTable], AnnealConfig, int],
) -> Optional[TrainResult]:
    dataset, embeddings, config, stage = task
    try:
        return run_psaw(dataset, embeddings, config, stage=stage)
    except NoDiscriminativeVocabulary:
        return None


def run_psaw_p(
    dataset: BinaryDataset,
    embeddings: Optional[EmbeddingTable],
    config: AnnealConfig,
    partition_mode: PartitionMode = PartitionMode.kmeans,
) -> TrainResult:
    """Learn one rule per part of the positives, possibly in parallel.

    Every part is searched against all the negative documents. The rules are
    merged in part order into one classifier evaluated on the whole dataset.

    """
    if config.rules_per_solution < 2:
        raise ConfigurationError("the parallel strategy needs at least 2 rules")
    started = time.perf_counter()
    seeds = derive_seeds(config.seed, config.rules_per_solution + 1)
    parts = partition_positives(
        dataset.positive,
        embeddings,
        config.rules_per_solution,
        partition_mode,
        np.random.default_rng(seeds[0]),
    )
    tasks = [
        (
            dataset.with_positive(part),
            embeddings,
            config.replace(rules_per_solution=1, seed=seeds[i + 1]),
            i,
        )
        for i, part in enumerate(parts)
    ]

    results: Iterable[Optional[TrainResult]]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(tasks))) as executor:
            results = list(executor.map(_run_part, tasks))
    else:
        results = [_run_part(t) for t in tasks]

    rules: List[RegexRule] = []
    history: List[RoundRecord] = []
    for i, result in enumerate(results):
        if result is None:
            logger.warning("Part %d has no discriminative vocabulary, skipped", i)
            continue
        rules.append(result.best.rules[0])
        history.extend(result.history)
    if not rules:
        raise NoDiscriminativeVocabulary(dataset.target_class)

    classifier = Classifier(tuple(rules))
    metrics = Evaluator(dataset, beta=config.beta).metrics(classifier)
    strategy = (
        Strategy.psaw_p_kmeans
        if PartitionMode(partition_mode) is PartitionMode.kmeans
        else Strategy.psaw_p_random
    )
    return TrainResult(
        classifier, metrics, history, time.perf_counter() - started, strategy
    )


def train(
    dataset: BinaryDataset,
    embeddings: Optional[EmbeddingTable],
    config: AnnealConfig,
    strategy: Strategy = Strategy.psaw,
) -> TrainResult:
    """Run the search of the given strategy."""
    strategy = Strategy(strategy)
    if strategy is Strategy.psaw:
        return run_psaw(dataset, embeddings, config)
    if strategy is Strategy.psaw_i:
        return run_psaw_i(dataset, embeddings, config)
    if strategy is Strategy.psaw_p_kmeans:
        return run_psaw_p(dataset, embeddings, config, PartitionMode.kmeans)
    return run_psaw_p(dataset, embeddings, config, PartitionMode.random)


def history_to_lines(history: Iterable[RoundRecord]) -> List[str]:
    """One JSON object per round."""
    return [json.dumps(record._asdict(), sort_keys=True) for record in history]
