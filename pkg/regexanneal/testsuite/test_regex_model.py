# -*- coding: utf-8 -*-
"""Test the rule structure, its normalization, matching and decoding."""

import pickle
import re

import numpy as np
import pytest

from regexanneal.errors import InvalidExpression, InvalidRuleFormat
from regexanneal.regex_model import (
    NEVER_MATCH,
    UNRESTRICTED,
    And,
    Chain,
    Classifier,
    InnerOr,
    Not,
    Or,
    OuterOr,
    RegexRule,
    Word,
    compile_rule,
    complexity,
    decode,
    format_classifier,
    format_rule,
    make_atom,
    match_classifier,
    match_rule,
    matches_expr,
    matches_outer,
    normalize,
    parse_rule,
    to_expr,
    validate_structure,
)
from regexanneal.testsuite import (
    EXPR_ALPHABET,
    BaseTestCase,
    all_strings,
    random_expr,
    random_rule,
)


def count_words(rule):
    total = 0
    for outer in (rule.positive, rule.negative):
        for chain in outer.alternatives:
            for element in chain.elements:
                total += 1 if isinstance(element, str) else len(element.words)
    return total


class TestStructure(BaseTestCase):
    def test_minimal_rule_passes(self):
        rule = RegexRule.from_chains([Chain(("w1",))])
        report = validate_structure(rule)
        assert report.passed and bool(report)

    def test_inner_or_with_nested_chain(self):
        expr = And((Or((Word("a"), And((Word("b"), Word("c"))))), Word("d")))
        report = validate_structure(expr)
        assert 3 in report.conditions
        assert any("children[0]" in v.path for v in report.violations)

    def test_negation_in_alternation(self):
        report = validate_structure(Or((Word("a"), Not(Word("b")))))
        assert 1 in report.conditions

    def test_expression_already_constrained(self):
        expr = And((Or((And((Word("a"), Word("b"))), Word("c"))), Not(Or((Word("d"),)))))
        assert validate_structure(expr).passed

    def test_invalid_values(self):
        with pytest.raises(ValueError):
            InnerOr(("a",))
        with pytest.raises(ValueError):
            InnerOr(("a", "a"))
        with pytest.raises(ValueError):
            Chain(("a", "b"), ())
        with pytest.raises(ValueError):
            Chain(("a", "b"), (-1,))
        with pytest.raises(ValueError):
            Chain(())

    def test_duplicate_alternatives_dropped(self):
        outer = OuterOr((Chain(("a",)), Chain(("b",)), Chain(("a",))))
        assert outer.alternatives == (Chain(("a",)), Chain(("b",)))
        assert len(outer.add(Chain(("b",)))) == 2

    def test_make_atom(self):
        assert make_atom(["a"]) == "a"
        assert make_atom(["a", "b", "a"]) == InnerOr(("a", "b"))

    def test_unrestricted_is_a_singleton(self):
        assert pickle.loads(pickle.dumps(UNRESTRICTED)) is UNRESTRICTED
        rule = RegexRule.from_chains([Chain.of("a", "b")])
        assert pickle.loads(pickle.dumps(rule)) == rule


class TestNormalize(BaseTestCase):
    def test_outer_alternation(self):
        rule = normalize(Or((Word("w1"), And((Word("w2"), Word("w3"))))))
        assert rule.positive.alternatives == (Chain.of("w1"), Chain.of("w2", "w3"))
        assert not rule.negative.alternatives

    def test_distribution(self):
        expr = And((Or((Word("w1"), And((Word("w2"), Word("w3"))))), Word("w4")))
        rule = normalize(expr)
        assert rule.positive.alternatives == (
            Chain.of("w1", "w4"),
            Chain.of("w2", "w3", "w4"),
        )

    def test_distribution_keeps_bounds(self):
        expr = And(
            (Or((Word("a"), And((Word("b"), Word("c")), (2,)))), Word("d")), (10,)
        )
        rule = normalize(expr)
        assert rule.positive.alternatives == (
            Chain(("a", "d"), (10,)),
            Chain(("b", "c", "d"), (2, 10)),
        )

    def test_inner_alternation(self):
        expr = And((Or((Word("fever"), Word("cough"))), Word("child")), (10,))
        rule = normalize(expr)
        assert rule.positive.alternatives == (
            Chain((InnerOr(("fever", "cough")), "child"), (10,)),
        )

    def test_negative_part(self):
        expr = And((Word("a"), Not(Or((Word("b"), Word("c"))))))
        rule = normalize(expr)
        assert rule == RegexRule.from_chains([Chain.of("a")], [Chain.of("b"), Chain.of("c")])

    def test_negation_gap_merge(self):
        expr = And((Word("a"), Not(Word("x")), Word("b")), (2, 5))
        rule = normalize(expr)
        assert rule.positive.alternatives == (Chain(("a", "b"), (5,)),)
        assert rule.negative.alternatives == (Chain.of("x"),)

    def test_double_negation(self):
        rule = normalize(Not(Not(Word("a"))))
        assert rule == RegexRule.from_chains([Chain.of("a")])

    @pytest.mark.parametrize(
        "expr",
        [
            Not(Word("a")),
            Or((Word("a"), Not(Word("b")))),
            And((Word("a"), Not(And((Word("b"), Not(Word("c"))))))),
            And((Not(Word("a")), Not(Word("b")))),
        ],
    )
    def test_inexpressible(self, expr):
        with pytest.raises(InvalidExpression):
            normalize(expr)

    def test_idempotent_on_rules(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            rule = random_rule(rng)
            assert normalize(rule) == rule
            assert normalize(to_expr(rule)) == rule

    def test_idempotent_on_expressions(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            expr = random_expr(rng)
            try:
                rule = normalize(expr)
            except InvalidExpression:
                continue
            assert normalize(rule) == rule

    def test_output_passes_validation(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            try:
                rule = normalize(random_expr(rng))
            except InvalidExpression:
                continue
            assert validate_structure(rule).passed

    def test_match_sets_preserved(self):
        """Normalized rules match the strings matched by the expression tree."""
        rng = np.random.default_rng(14)
        strings = list(all_strings(4))
        checked = 0
        for _ in range(100):
            expr = random_expr(rng)
            try:
                rule = normalize(expr)
            except InvalidExpression:
                with pytest.raises(InvalidExpression):
                    matches_expr(expr, "abc")
                continue
            checked += 1
            for s in strings:
                assert match_rule(rule, s) == matches_expr(expr, s), (expr, s)
        assert checked > 50


class TestMatching(BaseTestCase):
    def test_inner_or_rule(self):
        rule = RegexRule.from_chains([Chain((InnerOr(("headache", "dizzy", "giddy", "dizziness")),))])
        assert match_rule(rule, "my son has a headache since monday")
        assert not match_rule(rule, "serious hair loss")

    @pytest.mark.parametrize("gap, expected", [(2, True), (1, False), (UNRESTRICTED, True)])
    def test_gap_in_characters(self, gap, expected):
        rule = RegexRule.from_chains([Chain(("abc", "def"), (gap,))])
        assert match_rule(rule, "abcXXdef") is expected

    def test_order_matters(self):
        rule = RegexRule.from_chains([Chain.of("child", "fever")])
        assert match_rule(rule, "child with fever")
        assert not match_rule(rule, "fever in a child")

    def test_overlapping_occurrences_not_reused(self):
        rule = RegexRule.from_chains([Chain(("aa", "a"), (0,))])
        assert not match_rule(rule, "aa")
        assert match_rule(rule, "aaa")

    def test_later_occurrence_satisfies_gap(self):
        rule = RegexRule.from_chains([Chain(("a", "b"), (1,))])
        assert match_rule(rule, "a....a b")

    def test_empty_parts(self):
        assert not match_rule(RegexRule(), "anything")
        rule = RegexRule.from_chains([Chain.of("a")])
        assert match_rule(rule, "a")

    def test_negative_filters(self):
        rule = RegexRule.from_chains([Chain.of("fever")], [Chain.of("adult")])
        assert match_rule(rule, "child fever")
        assert not match_rule(rule, "adult fever")

    def test_empty_negative_equals_positive(self):
        rng = np.random.default_rng(20)
        for _ in range(100):
            rule = random_rule(rng)
            rule = RegexRule(rule.positive)
            for s in all_strings(3):
                assert match_rule(rule, s) == matches_outer(rule.positive, s)

    def test_classifier(self):
        r1 = RegexRule.from_chains([Chain.of("x")])
        r2 = RegexRule.from_chains([Chain.of("b")])
        assert match_classifier(Classifier((r1, r2)), "abc")
        assert not match_classifier(Classifier((RegexRule(), RegexRule())), "abc")
        assert not match_classifier(Classifier(), "abc")

    def test_classifier_fold(self):
        rng = np.random.default_rng(21)
        for _ in range(1000):
            rules = tuple(random_rule(rng) for _ in range(int(rng.integers(1, 4))))
            text = "".join(rng.choice(list(EXPR_ALPHABET), size=int(rng.integers(8))))
            expected = False
            for r in rules:
                expected = expected or match_rule(r, text)
            assert match_classifier(Classifier(rules), text) == expected

    def test_alternatives_monotone(self):
        rng = np.random.default_rng(22)
        texts = list(all_strings(4))
        for _ in range(30):
            rule = random_rule(rng)
            extra = random_rule(rng, max_alternatives=1)
            wider = RegexRule(
                OuterOr(rule.positive.alternatives + extra.positive.alternatives),
                rule.negative,
            )
            stricter = RegexRule(
                rule.positive,
                OuterOr(rule.negative.alternatives + extra.positive.alternatives),
            )
            for s in texts:
                if match_rule(rule, s):
                    assert match_rule(wider, s)
                else:
                    assert not match_rule(stricter, s)


class TestDecode(BaseTestCase):
    def test_inner_or_then_word(self):
        rule = RegexRule.from_chains([Chain((InnerOr(("w1", "w2", "w3")), "w4"), (UNRESTRICTED,))])
        assert decode(rule) == (".*(((w1|w2|w3).*w4)).*", NEVER_MATCH)

    def test_bounded_gap(self):
        rule = RegexRule.from_chains([Chain(("w5", InnerOr(("w6", "w7", "w8"))), (10,))])
        assert "w5.{0,10}(w6|w7|w8)" in decode(rule)[0]

    def test_initial_rule(self):
        group = InnerOr(("headache", "dizzy", "giddy", "dizziness"))
        rule = RegexRule.from_chains([Chain((group,))])
        assert decode(rule)[0] == ".*((headache|dizzy|giddy|dizziness)).*"
        assert format_rule(rule) == "((headache|dizzy|giddy|dizziness)).(#_#())"

    def test_escaping(self):
        rule = RegexRule.from_chains([Chain.of("a.b")])
        compiled = compile_rule(rule)
        assert compiled.matches("xa.by")
        assert not compiled.matches("xaXby")

    def test_engine_equivalence(self):
        rng = np.random.default_rng(30)
        texts = [
            "".join(rng.choice(list(EXPR_ALPHABET + " "), size=int(rng.integers(12))))
            for _ in range(100)
        ]
        for _ in range(200):
            rule = random_rule(rng)
            pos, neg = decode(rule)
            pos_re, neg_re = re.compile(pos, re.DOTALL), re.compile(neg, re.DOTALL)
            for text in texts:
                engine = pos_re.match(text) is not None and neg_re.match(text) is None
                assert match_rule(rule, text) == engine, (format_rule(rule), text)

    def test_format_classifier(self):
        rule = RegexRule.from_chains([Chain.of("fever")])
        text = format_classifier(Classifier((rule,)))
        assert "rule 1: (fever).(#_#())" in text
        assert "positive: .*((fever)).*" in text
        assert "excludes nothing" in text


class TestBracketedForm(BaseTestCase):
    def test_round_trip(self):
        rng = np.random.default_rng(40)
        for _ in range(300):
            rule = random_rule(rng)
            assert parse_rule(format_rule(rule)) == rule

    def test_special_characters(self):
        rule = RegexRule.from_chains(
            [Chain(("a|b", InnerOr(("(x)", "y.{0,2}"))), (3,))], [Chain.of("#_#")]
        )
        assert parse_rule(format_rule(rule)) == rule

    def test_example(self):
        rule = parse_rule("((fever|cough).{0,10}child).(#_#(adult))")
        assert rule == RegexRule.from_chains(
            [Chain((InnerOr(("fever", "cough")), "child"), (10,))], [Chain.of("adult")]
        )

    @pytest.mark.parametrize(
        "text",
        ["(a).(#_#", "(a)", "((a|a)).(#_#())", "(a.{0,}b).(#_#())", "(a).(#_#()) tail", "(a|a).(#_#())"],
    )
    def test_malformed(self, text):
        with pytest.raises(InvalidRuleFormat):
            parse_rule(text)


class TestComplexity(BaseTestCase):
    def test_values(self):
        assert complexity(RegexRule()) == 0
        rule = RegexRule.from_chains([Chain(("a", InnerOr(("b", "c"))), (UNRESTRICTED,))])
        assert complexity(rule) == 3

    def test_walk(self):
        rng = np.random.default_rng(50)
        for _ in range(200):
            rule = random_rule(rng)
            assert complexity(rule) == count_words(rule)
        rules = tuple(random_rule(rng) for _ in range(3))
        assert Classifier(rules).complexity == sum(count_words(r) for r in rules)
