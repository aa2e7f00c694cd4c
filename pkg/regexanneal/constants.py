# -*- coding: utf-8 -*-
"""Default parameters and enumerations shared by the search and the CLI.

The numerical defaults are the values the annealing search is tuned for:
temperatures, pool capacity, iteration budget, initialisation thresholds
and the distance table of the adjacency operator.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import enum
from typing import Tuple

#: Starting temperature of the cooling schedule.
DEFAULT_T_START = 0.5

#: Final temperature of the cooling schedule.
DEFAULT_T_END = 0.05

#: Capacity of the elite and of the neighbour pools.
DEFAULT_POOL_CAPACITY = 10

#: Number of replacement rounds.
DEFAULT_TOTAL_ITERATIONS = 1000

#: Weight of recall relative to precision in the F-measure.
DEFAULT_BETA = 0.2

#: Number of regular expressions in a classifier.
DEFAULT_RULES_PER_SOLUTION = 3

#: Minimal ratio between positive and negative relative frequencies of a keyword.
DEFAULT_TD_F = 5.0

#: Number of keywords considered when forming groups of subject words.
DEFAULT_N_W = 100

#: Cosine similarity above which two keywords belong to the same subject.
DEFAULT_TD_S = 0.75

#: Number of rounds without improvement of the best solution before stopping.
DEFAULT_STALL_LIMIT = 200

#: Maximal number of word occurrences in a single rule.
DEFAULT_COMPLEXITY_CAP = 60

#: Permitted upper bounds of the adjacency gaps, in characters.
DEFAULT_DISTANCE_TABLE: Tuple[int, ...] = (0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 100)

#: Number of candidate words drawn when extending an inner alternation.
INNER_OR_CANDIDATES = 10

#: Floor applied to cosine similarities before turning them into probabilities.
SIMILARITY_FLOOR = 1e-6

#: Number of times the keyword threshold is halved before giving up.
TD_F_HALVINGS = 3

#: Minimal number of positives in a partition used by the parallel strategy.
MIN_CLUSTER_SIZE = 5

#: Iteration cap of the k-means partitioning.
KMEANS_MAX_ITERATIONS = 50

#: Number of k-means restarts, the one with the lowest inertia is kept.
KMEANS_RESTARTS = 10

#: Number of draws attempted by a mutation before returning its input.
MUTATION_ATTEMPTS = 8


@enum.unique
class CorpusFormat(str, enum.Enum):
    """On-disk layout of a labelled corpus."""

    #: label<TAB>text[<TAB>space separated tokens]
    tsv = "tsv"

    #: One JSON object per line with label, text and optional tokens.
    jsonl = "jsonl"


@enum.unique
class Strategy(str, enum.Enum):
    """Search strategy used to learn a classifier."""

    #: All rules are evolved together.
    psaw = "psaw"

    #: Rules are learned one after the other on the unmatched residual.
    psaw_i = "psaw-i"

    #: The positives are clustered and one rule is learned per cluster.
    psaw_p_kmeans = "psaw-p-kmeans"

    #: The positives are split at random and one rule is learned per part.
    psaw_p_random = "psaw-p-random"


@enum.unique
class PartitionMode(str, enum.Enum):
    """How the positive documents are divided by the parallel strategy."""

    kmeans = "kmeans"
    random = "random"


@enum.unique
class Part(enum.IntEnum):
    """Side of a rule edited by a neighbourhood operator."""

    positive = 0
    negative = 1


@enum.unique
class Operator(enum.IntEnum):
    """Neighbourhood operators."""

    #: Add a word to an inner alternation.
    add_inner_or = 1

    #: Add a sub-expression to the outer alternation.
    add_outer_or = 2

    #: Remove an outer alternative or a word of an inner alternation.
    remove_or = 3

    #: Extend a conjunction.
    add_and = 4

    #: Exchange two elements of a conjunction.
    swap = 5

    #: Change the bound of a gap.
    distance = 6

    #: Remove an element of a conjunction.
    remove_and = 7


class ExitCode(enum.IntEnum):
    """Exit status of the command line tools."""

    success = 0
    config_error = 1
    data_error = 2
    training_failure = 3
