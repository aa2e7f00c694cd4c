# -*- coding: utf-8 -*-
"""Neighbourhood operators editing one part of one rule of a classifier.

Every operator returns a new rule and leaves its input untouched. An
operator that cannot produce a new structure returns its input.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from . import logger
from .constants import (
    DEFAULT_COMPLEXITY_CAP,
    DEFAULT_DISTANCE_TABLE,
    INNER_OR_CANDIDATES,
    MUTATION_ATTEMPTS,
    Operator,
    Part,
)
from .embeddings import EmbeddingTable, similarity_weighted_choice
from .errors import ConfigurationError, MutationError
from .regex_model import (
    UNRESTRICTED,
    Chain,
    Classifier,
    Gap,
    OuterOr,
    RegexRule,
    atom_words,
    complexity,
    make_atom,
)
from .typing import RandomStream


class OperatorSelector:
    """Policy choosing an operator among the applicable ones."""

    def select(self, applicable: Sequence[Operator], rng: RandomStream) -> Operator:
        raise NotImplementedError

    def feedback(self, operator: Operator, improved: bool) -> None:
        """Called with the outcome of a neighbour built by the operator."""
        pass


class UniformSelector(OperatorSelector):
    def select(self, applicable: Sequence[Operator], rng: RandomStream) -> Operator:
        return applicable[int(rng.integers(len(applicable)))]


@dataclass(frozen=True)
class MutationContext:
    """Word pools and limits shared by the operators of a search."""

    #: Words for edits of the positive part, best first.
    positive_words: Tuple[str, ...]

    #: Words for edits of the negative part, best first.
    negative_words: Tuple[str, ...]

    #: Permitted gap bounds, UNRESTRICTED being always permitted as well.
    distance_table: Tuple[int, ...] = DEFAULT_DISTANCE_TABLE

    #: Vectors guiding inner alternations, uniform choice when None.
    embeddings: Optional[EmbeddingTable] = None

    #: Maximal number of word occurrences in a rule.
    complexity_cap: int = DEFAULT_COMPLEXITY_CAP

    #: Probability of editing the positive part.
    positive_part_probability: float = 0.5

    selector: OperatorSelector = field(default_factory=UniformSelector)

    def __post_init__(self) -> None:
        object.__setattr__(self, "positive_words", tuple(self.positive_words))
        object.__setattr__(self, "negative_words", tuple(self.negative_words))
        object.__setattr__(self, "distance_table", tuple(self.distance_table))
        if not self.positive_words:
            raise ConfigurationError("the positive word pool is empty")
        if any(b < 0 for b in self.distance_table):
            raise ConfigurationError("distances must be non negative")
        if self.complexity_cap < 1:
            raise ConfigurationError("complexity_cap must be at least 1")
        if not 0 <= self.positive_part_probability <= 1:
            raise ConfigurationError("positive_part_probability must lie in [0, 1]")

    def pool(self, part: Part) -> Tuple[str, ...]:
        return self.positive_words if part is Part.positive else self.negative_words

    @property
    def gap_domain(self) -> Tuple[Gap, ...]:
        return tuple(dict.fromkeys(self.distance_table)) + (UNRESTRICTED,)


def get_part(rule: RegexRule, part: Part) -> OuterOr:
    return rule.positive if part is Part.positive else rule.negative


def with_part(rule: RegexRule, part: Part, chains: Sequence[Chain]) -> RegexRule:
    outer = OuterOr(tuple(chains))
    if part is Part.positive:
        return RegexRule(outer, rule.negative)
    return RegexRule(rule.positive, outer)


def _pick(rng: RandomStream, items: Sequence):
    return items[int(rng.integers(len(items)))]


_OperatorFunction = Callable[[RegexRule, Part, MutationContext, RandomStream], RegexRule]
_Applicability = Callable[[RegexRule, Part, MutationContext], bool]

_OPERATORS: Dict[Operator, Tuple[_OperatorFunction, _Applicability]] = {}


def register_operator(
    operator: Operator, applicable: _Applicability, uses_context: bool = True
) -> Callable[[Callable], Callable]:
    """Register an operator with the test telling whether it can be applied."""

    def _internal(func: Callable) -> Callable:
        call: _OperatorFunction = func
        if not uses_context:

            def call(rule, part, ctx, rng):  # type: ignore[no-redef]
                return func(rule, part, rng)

        _OPERATORS[operator] = (call, applicable)
        return func

    return _internal


def _has_alternative(rule: RegexRule, part: Part, ctx: MutationContext) -> bool:
    return bool(get_part(rule, part).alternatives)


def _has_pool(rule: RegexRule, part: Part, ctx: MutationContext) -> bool:
    return bool(ctx.pool(part))


def _can_extend(rule: RegexRule, part: Part, ctx: MutationContext) -> bool:
    return _has_alternative(rule, part, ctx) and _has_pool(rule, part, ctx)


def _has_conjunction(rule: RegexRule, part: Part, ctx: MutationContext) -> bool:
    return any(len(c) >= 2 for c in get_part(rule, part))


@register_operator(Operator.add_inner_or, _can_extend)
def o1_add_inner_or(
    rule: RegexRule, part: Part, ctx: MutationContext, rng: RandomStream
) -> RegexRule:
    """Add a word similar to an existing one to an element of a chain."""
    chains = list(get_part(rule, part))
    sites = [(i, j) for i, c in enumerate(chains) for j in range(len(c))]
    i, j = _pick(rng, sites)
    chain = chains[i]
    existing = atom_words(chain.elements[j])
    anchor = _pick(rng, existing)

    pool = ctx.pool(part)
    size = min(INNER_OR_CANDIDATES, len(pool))
    candidates = [pool[k] for k in rng.choice(len(pool), size=size, replace=False)]

    for _ in range(2):
        if ctx.embeddings is not None:
            word = similarity_weighted_choice(ctx.embeddings, anchor, candidates, rng)
        else:
            word = _pick(rng, candidates)
        if word not in existing:
            break
    else:
        return rule

    elements = list(chain.elements)
    elements[j] = make_atom(existing + (word,))
    chains[i] = Chain(tuple(elements), chain.gaps)
    return with_part(rule, part, chains)


@register_operator(Operator.add_outer_or, _has_pool)
def o2_add_outer_or(
    rule: RegexRule, part: Part, ctx: MutationContext, rng: RandomStream
) -> RegexRule:
    """Append a single word alternative, or a two word chain if it exists."""
    outer = get_part(rule, part)
    pool = ctx.pool(part)
    single = Chain((_pick(rng, pool),))
    if single not in outer.alternatives:
        return with_part(rule, part, outer.alternatives + (single,))
    if len(pool) < 2:
        return rule
    for _ in range(2):
        first, second = (pool[k] for k in rng.choice(len(pool), size=2, replace=False))
        chain = Chain((first, second), (_pick(rng, ctx.gap_domain),))
        if chain not in outer.alternatives:
            return with_part(rule, part, outer.alternatives + (chain,))
    return rule


@register_operator(Operator.remove_or, _has_alternative, uses_context=False)
def o3_remove_or(rule: RegexRule, part: Part, rng: RandomStream) -> RegexRule:
    """Delete an outer alternative or a word of an inner alternation."""
    chains = list(get_part(rule, part))
    sites: List[Tuple[int, int, int]] = [(i, -1, -1) for i in range(len(chains))]
    for i, c in enumerate(chains):
        for j, element in enumerate(c.elements):
            words = atom_words(element)
            if len(words) > 1:
                sites.extend((i, j, k) for k in range(len(words)))

    i, j, k = _pick(rng, sites)
    if j < 0:
        del chains[i]
    else:
        chain = chains[i]
        words = atom_words(chain.elements[j])
        elements = list(chain.elements)
        elements[j] = make_atom(words[:k] + words[k + 1 :])
        chains[i] = Chain(tuple(elements), chain.gaps)
    return with_part(rule, part, chains)


@register_operator(Operator.add_and, _can_extend)
def o4_add_and(
    rule: RegexRule, part: Part, ctx: MutationContext, rng: RandomStream
) -> RegexRule:
    """Insert a word in a chain; a single element is followed by the word half the time."""
    chains = list(get_part(rule, part))
    i = int(rng.integers(len(chains)))
    chain = chains[i]
    word = _pick(rng, ctx.pool(part))
    n = len(chain)

    if n == 1 and rng.random() < 0.5:
        chains[i] = Chain((chain.elements[0], word), (UNRESTRICTED,))
        return with_part(rule, part, chains)

    position = int(rng.integers(n + 1))
    elements = list(chain.elements)
    elements.insert(position, word)
    gaps = list(chain.gaps)
    gaps.insert(min(position, n - 1), UNRESTRICTED)
    chains[i] = Chain(tuple(elements), tuple(gaps))
    return with_part(rule, part, chains)


@register_operator(Operator.swap, _has_conjunction, uses_context=False)
def o5_swap(rule: RegexRule, part: Part, rng: RandomStream) -> RegexRule:
    """Exchange two elements of a chain; gaps stay at their positions."""
    chains = list(get_part(rule, part))
    i = _pick(rng, [i for i, c in enumerate(chains) if len(c) >= 2])
    chain = chains[i]
    a, b = (int(x) for x in rng.choice(len(chain), size=2, replace=False))
    elements = list(chain.elements)
    elements[a], elements[b] = elements[b], elements[a]
    chains[i] = Chain(tuple(elements), chain.gaps)
    return with_part(rule, part, chains)


@register_operator(Operator.distance, _has_conjunction)
def o6_distance(
    rule: RegexRule, part: Part, ctx: MutationContext, rng: RandomStream
) -> RegexRule:
    """Give a new value from the distance table to one gap."""
    chains = list(get_part(rule, part))
    sites = [(i, g) for i, c in enumerate(chains) for g in range(len(c.gaps))]
    i, g = _pick(rng, sites)
    chain = chains[i]
    values = [v for v in ctx.gap_domain if v != chain.gaps[g]]
    gaps = list(chain.gaps)
    gaps[g] = _pick(rng, values)
    chains[i] = Chain(chain.elements, tuple(gaps))
    return with_part(rule, part, chains)


@register_operator(Operator.remove_and, _has_conjunction, uses_context=False)
def o7_remove_and(rule: RegexRule, part: Part, rng: RandomStream) -> RegexRule:
    """Delete an element of a chain; the gaps around it merge to UNRESTRICTED."""
    chains = list(get_part(rule, part))
    i = _pick(rng, [i for i, c in enumerate(chains) if len(c) >= 2])
    chain = chains[i]
    n = len(chain)
    j = int(rng.integers(n))
    elements = chain.elements[:j] + chain.elements[j + 1 :]
    gaps = list(chain.gaps)
    if j == 0:
        del gaps[0]
    elif j == n - 1:
        del gaps[-1]
    else:
        gaps[j - 1 : j + 1] = [UNRESTRICTED]
    chains[i] = Chain(elements, tuple(gaps))
    return with_part(rule, part, chains)


def applicable_operators(
    rule: RegexRule, part: Part, ctx: MutationContext
) -> List[Operator]:
    return [op for op in Operator if _OPERATORS[op][1](rule, part, ctx)]


def apply_operator(
    operator: Operator,
    rule: RegexRule,
    part: Part,
    ctx: MutationContext,
    rng: RandomStream,
) -> RegexRule:
    return _OPERATORS[operator][0](rule, part, ctx, rng)


class MutationRecord(NamedTuple):
    """Which edit produced a neighbour."""

    rule_index: int
    part: Part
    operator: Operator

    #: Draws made before an accepted edit, 1 when the first one was accepted.
    attempts: int


def mutate_with_record(
    classifier: Classifier, ctx: MutationContext, rng: RandomStream
) -> Tuple[Classifier, MutationRecord]:
    """Change one rule of the classifier with one operator.

    The rule is drawn uniformly, the part according to the context, the
    operator by the selector among the applicable ones. Draws leaving the
    rule unchanged or exceeding the complexity cap are repeated. When every
    draw fails, a word is added to the positive part of a rule.

    Raises
    ------
    MutationError
        Raised if even the fallback cannot change the classifier.

    """
    if not len(classifier):
        raise MutationError("a classifier without rules cannot be mutated")
    for attempt in range(1, MUTATION_ATTEMPTS + 1):
        index = int(rng.integers(len(classifier)))
        rule = classifier.rules[index]
        if rng.random() < ctx.positive_part_probability:
            part = Part.positive
        else:
            part = Part.negative
        operators = applicable_operators(rule, part, ctx)
        if not operators:
            continue
        operator = ctx.selector.select(operators, rng)
        new_rule = apply_operator(operator, rule, part, ctx, rng)
        if new_rule != rule and complexity(new_rule) <= ctx.complexity_cap:
            record = MutationRecord(index, part, operator, attempt)
            return classifier.replace_rule(index, new_rule), record

    logger.debug("No effective mutation in %d draws, adding a word", MUTATION_ATTEMPTS)
    for index in rng.permutation(len(classifier)):
        index = int(index)
        rule = classifier.rules[index]
        new_rule = o2_add_outer_or(rule, Part.positive, ctx, rng)
        if new_rule != rule and complexity(new_rule) <= ctx.complexity_cap:
            record = MutationRecord(
                index, Part.positive, Operator.add_outer_or, MUTATION_ATTEMPTS + 1
            )
            return classifier.replace_rule(index, new_rule), record
    raise MutationError("no operator can change the classifier")


def mutate(classifier: Classifier, ctx: MutationContext, rng: RandomStream) -> Classifier:
    return mutate_with_record(classifier, ctx, rng)[0]
