# -*- coding: utf-8 -*-
"""RegexAnneal testsuite."""

import itertools
import logging
from logging.handlers import BufferingHandler

from regexanneal import logger
from regexanneal.corpus import Document, LabeledCorpus
from regexanneal.regex_model import UNRESTRICTED, And, Chain, InnerOr, Not, Or, RegexRule, Word


class TestHandler(BufferingHandler):
    def __init__(self, only_warnings=False):
        # BufferingHandler takes a "capacity" argument
        # so as to know when to flush. As we're overriding
        # shouldFlush anyway, we can set a capacity of zero.
        self.only_warnings = only_warnings
        BufferingHandler.__init__(self, 0)

    def shouldFlush(self, record):
        return False

    def emit(self, record):
        if self.only_warnings and record.levelno != logging.WARNING:
            return
        self.buffer.append(record.__dict__)


class BaseTestCase:
    CHECK_NO_WARNING = True

    def setup_method(self):
        self._test_handler = None
        if self.CHECK_NO_WARNING:
            self._test_handler = th = TestHandler()
            th.setLevel(logging.WARNING)
            logger.addHandler(th)

    def teardown_method(self):
        if self._test_handler is not None:
            logger.removeHandler(self._test_handler)
            buf = self._test_handler.buffer
            length = len(buf)
            msg = "\n".join(record.get("msg", str(record)) for record in buf)
            assert length == 0, "%d warnings raised.\n%s" % (length, msg)


def make_corpus(records):
    """Corpus of (label, text) pairs tokenized on whitespace."""
    return LabeledCorpus(
        tuple(
            Document(i, text, tuple(text.split()), label)
            for i, (label, text) in enumerate(records)
        )
    )


def make_dataset(positive, negative, target="pos"):
    """Binary dataset from positive and negative texts."""
    records = [(target, t) for t in positive] + [("neg", t) for t in negative]
    return make_corpus(records).binary_split(target)


#: Gaps drawn by random_rule.
RANDOM_GAPS = (UNRESTRICTED, 0, 1, 2, 4)


def random_atom(rng, words):
    if rng.random() < 0.7:
        return words[int(rng.integers(len(words)))]
    k = int(rng.integers(2, min(3, len(words)) + 1))
    return InnerOr(tuple(rng.choice(words, size=k, replace=False).tolist()))


def random_chain(rng, words, max_length=3):
    n = int(rng.integers(1, max_length + 1))
    return Chain(
        tuple(random_atom(rng, words) for _ in range(n)),
        tuple(RANDOM_GAPS[int(rng.integers(len(RANDOM_GAPS)))] for _ in range(n - 1)),
    )


def random_rule(rng, words=tuple("abcde"), max_alternatives=2):
    """Rule drawn over the words, either part possibly empty."""
    positive = [random_chain(rng, words) for _ in range(int(rng.integers(max_alternatives + 1)))]
    negative = [random_chain(rng, words) for _ in range(int(rng.integers(max_alternatives + 1)))]
    return RegexRule.from_chains(positive, negative)


#: Single character words of the random expressions.
EXPR_ALPHABET = "abcde"

#: Gaps drawn by random_positive and random_expr.
EXPR_GAPS = (UNRESTRICTED, 0, 1, 2)


def all_strings(max_length, alphabet=EXPR_ALPHABET):
    """Every string over the alphabet up to the given length, shortest first."""
    for n in range(max_length + 1):
        for chars in itertools.product(alphabet, repeat=n):
            yield "".join(chars)


def random_positive(rng, depth):
    """Expression without negation over single characters."""
    if depth == 0 or rng.random() < 0.3:
        return Word(EXPR_ALPHABET[int(rng.integers(5))])
    n = int(rng.integers(1, 4))
    children = tuple(random_positive(rng, depth - 1) for _ in range(n))
    if rng.random() < 0.5:
        return Or(children)
    return And(children, tuple(EXPR_GAPS[int(rng.integers(4))] for _ in range(n - 1)))


def random_expr(rng, depth=3):
    """Expression whose negations are reachable through conjunctions only."""
    if depth == 0 or rng.random() < 0.2:
        return Word(EXPR_ALPHABET[int(rng.integers(5))])
    roll = rng.random()
    if roll < 0.3:
        return Or(tuple(random_positive(rng, depth - 1) for _ in range(int(rng.integers(1, 4)))))
    if roll < 0.4:
        return Not(Not(random_expr(rng, depth - 1)))
    n = int(rng.integers(1, 4))
    children = []
    for _ in range(n):
        if rng.random() < 0.25:
            children.append(Not(random_positive(rng, depth - 1)))
        else:
            children.append(random_expr(rng, depth - 1))
    return And(tuple(children), tuple(EXPR_GAPS[int(rng.integers(4))] for _ in range(n - 1)))
