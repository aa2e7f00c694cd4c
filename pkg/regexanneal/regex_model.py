# -*- coding: utf-8 -*-
"""Constrained regular-expression rules and their unconstrained counterpart.

A rule is written ``(P).(#_#(N))`` where P and N are outer alternations of
chains. A chain is an ordered conjunction of elements separated by gaps, an
element being a word or an inner alternation of words. A gap is either
unrestricted or bounded by a number of characters.

Words are matched as literal substrings of the raw text. Gaps are measured in
characters between the end of one occurrence and the start of the next one.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import re
from dataclasses import dataclass, field
from typing import (
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from typing_extensions import TypeAlias

from .errors import InvalidExpression, InvalidRuleFormat


class _Unrestricted:
    """Gap allowing any separation between two elements."""

    _instance: Optional["_Unrestricted"] = None

    def __new__(cls) -> "_Unrestricted":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNRESTRICTED"

    def __reduce__(self) -> str:
        return "UNRESTRICTED"


#: Sentinel for a gap without upper bound.
UNRESTRICTED = _Unrestricted()

#: A gap is UNRESTRICTED or the maximal number of characters between elements.
Gap: TypeAlias = Union[int, _Unrestricted]

#: Pattern matching nothing, used for empty alternations.
NEVER_MATCH = "(?!)"


def _check_gap(gap: object) -> None:
    if gap is UNRESTRICTED:
        return
    if isinstance(gap, bool) or not isinstance(gap, int) or gap < 0:
        raise ValueError("A gap is UNRESTRICTED or a non negative int, not %r" % (gap,))


def looser_gap(first: Gap, second: Gap) -> Gap:
    """The gap accepting every separation accepted by either of the two."""
    if first is UNRESTRICTED or second is UNRESTRICTED:
        return UNRESTRICTED
    return max(first, second)  # type: ignore[type-var]


@dataclass(frozen=True)
class InnerOr:
    """Alternation of at least two distinct words."""

    words: Tuple[str, ...]

    def __post_init__(self) -> None:
        words = tuple(self.words)
        if len(words) < 2:
            raise ValueError("An inner alternation needs at least two words")
        if any(not isinstance(w, str) or not w for w in words):
            raise ValueError("Inner alternation words must be non empty strings")
        if len(set(words)) != len(words):
            raise ValueError("Duplicate word in inner alternation %r" % (words,))
        object.__setattr__(self, "words", words)

    def __str__(self) -> str:
        return "(%s)" % "|".join(_escape(w) for w in self.words)


#: An element of a chain.
Atom: TypeAlias = Union[str, InnerOr]


def make_atom(words: Iterable[str]) -> Atom:
    """Build the element matching any of the words, duplicates removed."""
    unique = tuple(dict.fromkeys(words))
    if not unique:
        raise ValueError("An element needs at least one word")
    return unique[0] if len(unique) == 1 else InnerOr(unique)


def atom_words(atom: Atom) -> Tuple[str, ...]:
    """Words matched by an element."""
    return (atom,) if isinstance(atom, str) else atom.words


@dataclass(frozen=True)
class Chain:
    """Ordered conjunction of elements separated by gaps."""

    elements: Tuple[Atom, ...]
    gaps: Tuple[Gap, ...] = ()

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        gaps = tuple(self.gaps)
        if not elements:
            raise ValueError("A chain needs at least one element")
        for e in elements:
            if isinstance(e, str):
                if not e:
                    raise ValueError("Chain words must be non empty")
            elif not isinstance(e, InnerOr):
                raise ValueError("Invalid chain element %r" % (e,))
        if len(gaps) != len(elements) - 1:
            raise ValueError(
                "A chain of %d elements needs %d gaps, got %d"
                % (len(elements), len(elements) - 1, len(gaps))
            )
        for g in gaps:
            _check_gap(g)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "gaps", gaps)

    @classmethod
    def of(cls, *elements: Atom, gap: Gap = UNRESTRICTED) -> "Chain":
        """Chain whose gaps are all equal."""
        return cls(tuple(elements), (gap,) * (len(elements) - 1))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def word_count(self) -> int:
        return sum(len(atom_words(e)) for e in self.elements)


@dataclass(frozen=True)
class OuterOr:
    """Outer alternation of chains; structural duplicates are dropped."""

    alternatives: Tuple[Chain, ...] = ()

    def __post_init__(self) -> None:
        alternatives = tuple(dict.fromkeys(self.alternatives))
        if any(not isinstance(a, Chain) for a in alternatives):
            raise ValueError("Outer alternatives must be chains")
        object.__setattr__(self, "alternatives", alternatives)

    def __len__(self) -> int:
        return len(self.alternatives)

    def __iter__(self) -> Iterator[Chain]:
        return iter(self.alternatives)

    def add(self, chain: Chain) -> "OuterOr":
        return OuterOr(self.alternatives + (chain,))


@dataclass(frozen=True)
class RegexRule:
    """A rule matching documents matched by positive and not by negative."""

    positive: OuterOr = field(default_factory=OuterOr)
    negative: OuterOr = field(default_factory=OuterOr)

    @classmethod
    def from_chains(
        cls, positive: Iterable[Chain] = (), negative: Iterable[Chain] = ()
    ) -> "RegexRule":
        return cls(OuterOr(tuple(positive)), OuterOr(tuple(negative)))

    def __str__(self) -> str:
        return format_rule(self)


@dataclass(frozen=True)
class Classifier:
    """Ordered vector of rules; a document is in the class if any rule matches.

    A classifier without rules matches nothing.

    """

    rules: Tuple[RegexRule, ...] = ()

    def __post_init__(self) -> None:
        rules = tuple(self.rules)
        if any(not isinstance(r, RegexRule) for r in rules):
            raise ValueError("Classifier rules must be RegexRule instances")
        object.__setattr__(self, "rules", rules)

    def __len__(self) -> int:
        return len(self.rules)

    def replace_rule(self, index: int, rule: RegexRule) -> "Classifier":
        rules = list(self.rules)
        rules[index] = rule
        return Classifier(tuple(rules))

    @property
    def complexity(self) -> int:
        return sum(complexity(r) for r in self.rules)


# --- Unconstrained expressions


@dataclass(frozen=True)
class Word:
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("Words must be non empty")


@dataclass(frozen=True)
class Or:
    children: Tuple["UnconstrainedExpr", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class And:
    """Ordered conjunction; gaps default to UNRESTRICTED."""

    children: Tuple["UnconstrainedExpr", ...]
    gaps: Optional[Tuple[Gap, ...]] = None

    def __post_init__(self) -> None:
        children = tuple(self.children)
        if not children:
            raise ValueError("A conjunction needs at least one child")
        gaps = (
            (UNRESTRICTED,) * (len(children) - 1)
            if self.gaps is None
            else tuple(self.gaps)
        )
        if len(gaps) != len(children) - 1:
            raise ValueError("A conjunction of n children needs n - 1 gaps")
        for g in gaps:
            _check_gap(g)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "gaps", gaps)


@dataclass(frozen=True)
class Not:
    child: "UnconstrainedExpr"


#: Expression tree over words, alternation, conjunction and negation.
UnconstrainedExpr: TypeAlias = Union[Word, Or, And, Not]


def _contains_not(expr: UnconstrainedExpr) -> bool:
    if isinstance(expr, Not):
        return True
    if isinstance(expr, (Or, And)):
        return any(_contains_not(c) for c in expr.children)
    return False


def _drop_double_negations(expr: UnconstrainedExpr) -> UnconstrainedExpr:
    if isinstance(expr, Not):
        if isinstance(expr.child, Not):
            return _drop_double_negations(expr.child.child)
        return Not(_drop_double_negations(expr.child))
    if isinstance(expr, Or):
        return Or(tuple(_drop_double_negations(c) for c in expr.children))
    if isinstance(expr, And):
        return And(tuple(_drop_double_negations(c) for c in expr.children), expr.gaps)
    return expr


def _strip_negations(
    expr: UnconstrainedExpr,
) -> Tuple[Optional[UnconstrainedExpr], List[UnconstrainedExpr]]:
    """Separate the negated sub-expressions reachable through conjunctions.

    A removed child takes no position: the gaps around it merge into the
    looser one.

    """
    if isinstance(expr, Not):
        if _contains_not(expr.child):
            raise InvalidExpression("a negation cannot contain another negation")
        return None, [expr.child]

    if isinstance(expr, And):
        negated: List[UnconstrainedExpr] = []
        kept: List[UnconstrainedExpr] = []
        kept_gaps: List[Gap] = []
        pending: Optional[Gap] = None
        for i, child in enumerate(expr.children):
            if i > 0:
                gap = expr.gaps[i - 1]  # type: ignore[index]
                pending = gap if pending is None else looser_gap(pending, gap)
            sub, negs = _strip_negations(child)
            negated.extend(negs)
            if sub is None:
                continue
            if kept:
                assert pending is not None
                kept_gaps.append(pending)
            kept.append(sub)
            pending = None
        if not kept:
            return None, negated
        return And(tuple(kept), tuple(kept_gaps)), negated

    if _contains_not(expr):
        raise InvalidExpression("a negation below an alternation cannot be expressed")
    return expr, []


def _split_rule(
    expr: UnconstrainedExpr,
) -> Tuple[UnconstrainedExpr, List[UnconstrainedExpr]]:
    expr = _drop_double_negations(expr)
    positive, negated = _strip_negations(expr)
    if positive is None:
        raise InvalidExpression("the expression has no positive part")
    # Unwrap the conjunction of a positive part with its negation
    if negated and isinstance(positive, And) and len(positive.children) == 1:
        positive = positive.children[0]
    return positive, negated


_Path = Tuple[Tuple[Atom, ...], Tuple[Gap, ...]]


def _flatten_or(expr: Or) -> Iterator[UnconstrainedExpr]:
    for c in expr.children:
        if isinstance(c, Or):
            yield from _flatten_or(c)
        else:
            yield c


def _expand_inner(expr: UnconstrainedExpr) -> List[_Path]:
    if isinstance(expr, Word):
        return [((expr.text,), ())]
    if isinstance(expr, Or):
        leaves = list(_flatten_or(expr))
        words = [c.text for c in leaves if isinstance(c, Word)]
        paths: List[_Path] = [((make_atom(words),), ())] if words else []
        for c in leaves:
            if not isinstance(c, Word):
                paths.extend(_expand_inner(c))
        return paths
    if isinstance(expr, And):
        acc: List[_Path] = [((), ())]
        for i, child in enumerate(expr.children):
            link = (expr.gaps[i - 1],) if i else ()  # type: ignore[index]
            acc = [
                (e1 + e2, g1 + link + g2)
                for e1, g1 in acc
                for e2, g2 in _expand_inner(child)
            ]
        return acc
    raise InvalidExpression("unexpected negation")


def _expand_top(expr: UnconstrainedExpr) -> List[Chain]:
    if isinstance(expr, Or):
        return [chain for c in _flatten_or(expr) for chain in _expand_top(c)]
    return [Chain(elements, gaps) for elements, gaps in _expand_inner(expr)]


def normalize(expr: Union[UnconstrainedExpr, RegexRule]) -> RegexRule:
    """Rewrite an expression into an equivalent constrained rule.

    Alternations are lifted to the outer level and conjunctions are
    distributed over the alternations they contain, gaps being kept on the
    distributed edges. Negations reachable from the root through conjunctions
    form the negative part.

    Raises
    ------
    InvalidExpression
        Raised for negations that cannot be written as a single rule, such as
        a negation below an alternation.

    """
    if isinstance(expr, RegexRule):
        expr = to_expr(expr)
    positive, negated = _split_rule(expr)
    pos_chains = _expand_top(positive)
    neg_chains = [chain for n in negated for chain in _expand_top(n)]
    return RegexRule.from_chains(pos_chains, neg_chains)


def _atom_expr(atom: Atom) -> UnconstrainedExpr:
    if isinstance(atom, str):
        return Word(atom)
    return Or(tuple(Word(w) for w in atom.words))


def _outer_expr(outer: OuterOr) -> Or:
    return Or(
        tuple(
            And(tuple(_atom_expr(e) for e in chain.elements), chain.gaps)
            for chain in outer
        )
    )


def to_expr(rule: RegexRule) -> UnconstrainedExpr:
    """Unconstrained expression with the match set of the rule."""
    positive = _outer_expr(rule.positive)
    if not rule.negative.alternatives:
        return positive
    return And((positive, Not(_outer_expr(rule.negative))))


# --- Matching


def _occurrences(atom: Atom, text: str) -> List[Tuple[int, int]]:
    spans = []
    for word in atom_words(atom):
        start = text.find(word)
        while start != -1:
            spans.append((start, start + len(word)))
            start = text.find(word, start + 1)
    return spans


def _gap_allows(gap: Gap, separation: int) -> bool:
    return separation >= 0 and (gap is UNRESTRICTED or separation <= gap)  # type: ignore[operator]


def match_chain(chain: Chain, text: str) -> bool:
    """Whether occurrences of the elements exist in order within the gaps."""
    ends: Set[int] = {end for _, end in _occurrences(chain.elements[0], text)}
    for gap, element in zip(chain.gaps, chain.elements[1:]):
        if not ends:
            return False
        ends = {
            end
            for start, end in _occurrences(element, text)
            if any(_gap_allows(gap, start - p) for p in ends)
        }
    return bool(ends)


def matches_outer(outer: OuterOr, text: str) -> bool:
    return any(match_chain(chain, text) for chain in outer)


def match_rule(rule: RegexRule, text: str) -> bool:
    """Whether the positive part matches the text and the negative does not."""
    return matches_outer(rule.positive, text) and not matches_outer(
        rule.negative, text
    )


def match_classifier(classifier: Classifier, text: str) -> bool:
    return any(match_rule(rule, text) for rule in classifier.rules)


def _spans(expr: UnconstrainedExpr, text: str) -> FrozenSet[Tuple[int, int]]:
    if isinstance(expr, Word):
        return frozenset(_occurrences(expr.text, text))
    if isinstance(expr, Or):
        return frozenset().union(*(_spans(c, text) for c in expr.children))
    if isinstance(expr, And):
        acc = _spans(expr.children[0], text)
        for gap, child in zip(expr.gaps, expr.children[1:]):  # type: ignore[arg-type]
            nxt = _spans(child, text)
            acc = frozenset(
                (s1, e2) for s1, e1 in acc for s2, e2 in nxt if _gap_allows(gap, s2 - e1)
            )
        return acc
    raise InvalidExpression("unexpected negation")


def matches_expr(expr: UnconstrainedExpr, text: str) -> bool:
    """Match an unconstrained expression by direct evaluation of the tree."""
    positive, negated = _split_rule(expr)
    return bool(_spans(positive, text)) and not any(
        _spans(n, text) for n in negated
    )


# --- Structure


class Violation(NamedTuple):
    #: Number of the violated structural condition (1 to 4).
    condition: int

    #: Location of the offending node.
    path: str

    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    @property
    def conditions(self) -> FrozenSet[int]:
        return frozenset(v.condition for v in self.violations)


def _validate_outer(outer: object, path: str, out: List[Violation]) -> None:
    if not isinstance(outer, OuterOr):
        out.append(Violation(2, path, "a part must be an outer alternation"))
        return
    seen: Set[Chain] = set()
    for i, chain in enumerate(outer.alternatives):
        cpath = "%s[%d]" % (path, i)
        if not isinstance(chain, Chain):
            out.append(Violation(2, cpath, "alternatives must be chains"))
            continue
        if chain in seen:
            out.append(Violation(2, cpath, "duplicate alternative"))
        seen.add(chain)
        if len(chain.gaps) != len(chain.elements) - 1:
            out.append(Violation(4, cpath, "gap count does not match elements"))
        for j, gap in enumerate(chain.gaps):
            try:
                _check_gap(gap)
            except ValueError as e:
                out.append(Violation(4, "%s.gaps[%d]" % (cpath, j), str(e)))
        for j, element in enumerate(chain.elements):
            epath = "%s.elements[%d]" % (cpath, j)
            if isinstance(element, str):
                continue
            if not isinstance(element, InnerOr):
                out.append(Violation(4, epath, "elements are words or inner alternations"))
            elif not all(isinstance(w, str) for w in element.words):
                out.append(Violation(3, epath, "an inner alternation holds words only"))
            elif len(set(element.words)) != len(element.words):
                out.append(Violation(3, epath, "duplicate word in inner alternation"))


def _validate_expr(
    expr: UnconstrainedExpr, path: str, level: str, out: List[Violation]
) -> None:
    # level: "root", "part" (outer alternation), "element" (inside a
    # conjunction) or "inner" (inside an inner alternation)
    if isinstance(expr, Word):
        return

    if isinstance(expr, Not):
        out.append(Violation(1, path, "a negation only applies to the negative part"))
        _validate_expr(expr.child, path + ".child", "part", out)
        return

    children = ["%s.children[%d]" % (path, i) for i in range(len(expr.children))]

    if isinstance(expr, Or):
        child_level = "inner" if level in ("element", "inner") else "part"
        for c, cpath in zip(expr.children, children):
            if child_level == "inner" and isinstance(c, (And, Not)):
                out.append(Violation(3, cpath, "an inner alternation holds words only"))
            _validate_expr(c, cpath, child_level, out)
        return

    if level == "inner":
        out.append(Violation(3, path, "an inner alternation holds words only"))

    negations = [i for i, c in enumerate(expr.children) if isinstance(c, Not)]
    if level != "root" or not negations:
        for c, cpath in zip(expr.children, children):
            _validate_expr(c, cpath, "element", out)
        return

    # Root conjunction of a positive part with the negative part
    for i in negations[1:]:
        out.append(Violation(1, children[i], "more than one negation"))
    kept = [i for i in range(len(expr.children)) if i not in negations]
    if not kept:
        out.append(Violation(1, path, "the rule has no positive part"))
    for i in negations:
        _validate_expr(expr.children[i].child, children[i] + ".child", "part", out)  # type: ignore[union-attr]
    for i in kept:
        _validate_expr(
            expr.children[i], children[i], "part" if len(kept) == 1 else "element", out
        )


def validate_structure(rule: Union[RegexRule, UnconstrainedExpr]) -> ValidationReport:
    """Check the structural conditions of a rule.

    1. a rule has at most one negation, which is its negative part
    2. each part is an outer alternation of chains
    3. an inner alternation only holds words
    4. chains hold words and inner alternations separated by valid gaps

    Expressions are checked for being already written in that shape.

    """
    out: List[Violation] = []
    if isinstance(rule, RegexRule):
        _validate_outer(rule.positive, "positive", out)
        _validate_outer(rule.negative, "negative", out)
    elif isinstance(rule, (Word, Or, And, Not)):
        _validate_expr(rule, "root", "root", out)
    else:
        out.append(Violation(2, "root", "not a rule: %r" % (rule,)))
    return ValidationReport(tuple(out))


def complexity(rule: RegexRule) -> int:
    """Number of word occurrences in both parts."""
    return sum(c.word_count for c in rule.positive) + sum(
        c.word_count for c in rule.negative
    )


# --- Decoding


def _decode_atom(atom: Atom) -> str:
    if isinstance(atom, str):
        return re.escape(atom)
    return "(%s)" % "|".join(re.escape(w) for w in atom.words)


def _decode_gap(gap: Gap) -> str:
    return ".*" if gap is UNRESTRICTED else ".{0,%d}" % gap


def _decode_chain(chain: Chain) -> str:
    if len(chain.elements) == 1 and isinstance(chain.elements[0], InnerOr):
        return "|".join(re.escape(w) for w in chain.elements[0].words)
    parts = [_decode_atom(chain.elements[0])]
    for gap, element in zip(chain.gaps, chain.elements[1:]):
        parts.append(_decode_gap(gap))
        parts.append(_decode_atom(element))
    return "".join(parts)


def decode_outer(outer: OuterOr) -> str:
    if not outer.alternatives:
        return NEVER_MATCH
    return ".*((%s)).*" % "|".join(_decode_chain(c) for c in outer)


def decode(rule: RegexRule) -> Tuple[str, str]:
    """Positive and negative patterns for a standard regular expression engine.

    A text is accepted when the positive pattern matches and the negative one
    does not. Patterns are meant to be compiled with ``re.DOTALL``.

    """
    return decode_outer(rule.positive), decode_outer(rule.negative)


class CompiledRule(NamedTuple):
    positive: "re.Pattern[str]"
    negative: "re.Pattern[str]"

    def matches(self, text: str) -> bool:
        return (
            self.positive.match(text) is not None
            and self.negative.match(text) is None
        )


def compile_rule(rule: RegexRule) -> CompiledRule:
    pos, neg = decode(rule)
    return CompiledRule(re.compile(pos, re.DOTALL), re.compile(neg, re.DOTALL))


# --- Bracketed form
#
# rule  := "(" alts ")" ".(#_#(" alts "))"
# alts  := [ chain { "|" chain } ]
# chain := atom { gap atom }
# gap   := "." | ".{0," digits "}"
# atom  := word | "(" word "|" word { "|" word } ")"
# word  := { char | "\" special }

_SPECIAL = set("\\|().{}#")


def _escape(word: str) -> str:
    return "".join("\\" + c if c in _SPECIAL else c for c in word)


def _format_atom(atom: Atom) -> str:
    return _escape(atom) if isinstance(atom, str) else str(atom)


def _format_chain(chain: Chain) -> str:
    parts = [_format_atom(chain.elements[0])]
    for gap, element in zip(chain.gaps, chain.elements[1:]):
        parts.append("." if gap is UNRESTRICTED else ".{0,%d}" % gap)
        parts.append(_format_atom(element))
    return "".join(parts)


def format_outer(outer: OuterOr) -> str:
    return "|".join(_format_chain(c) for c in outer)


def format_rule(rule: RegexRule) -> str:
    """Canonical bracketed form, for instance ``((fever|cough)).(#_#(adult))``."""
    return "(%s).(#_#(%s))" % (format_outer(rule.positive), format_outer(rule.negative))


class _RuleParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, expected: Optional[str] = None) -> InvalidRuleFormat:
        return InvalidRuleFormat.bad_syntax(self.text, self.pos, expected)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.pos):
            raise self.error(repr(literal))
        self.pos += len(literal)

    def word(self) -> str:
        chars = []
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "\\":
                if self.pos + 1 >= len(self.text):
                    raise self.error("an escaped character")
                chars.append(self.text[self.pos + 1])
                self.pos += 2
            elif c in _SPECIAL:
                break
            else:
                chars.append(c)
                self.pos += 1
        if not chars:
            raise self.error("a word")
        return "".join(chars)

    def atom(self) -> Atom:
        if self.peek() != "(":
            return self.word()
        self.pos += 1
        words = [self.word()]
        while self.peek() == "|":
            self.pos += 1
            words.append(self.word())
        self.expect(")")
        if len(words) < 2 or len(set(words)) != len(words):
            raise self.error("an alternation of distinct words")
        return InnerOr(tuple(words))

    def gap(self) -> Gap:
        self.expect(".")
        if not self.text.startswith("{0,", self.pos):
            return UNRESTRICTED
        self.pos += 3
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("a distance")
        bound = int(self.text[start : self.pos])
        self.expect("}")
        return bound

    def chain(self) -> Chain:
        elements = [self.atom()]
        gaps = []
        while self.peek() == ".":
            gaps.append(self.gap())
            elements.append(self.atom())
        return Chain(tuple(elements), tuple(gaps))

    def alternatives(self) -> OuterOr:
        chains: List[Chain] = []
        if self.peek() != ")":
            chains.append(self.chain())
            while self.peek() == "|":
                self.pos += 1
                chains.append(self.chain())
        if len(set(chains)) != len(chains):
            raise self.error("distinct alternatives")
        return OuterOr(tuple(chains))

    def rule(self) -> RegexRule:
        self.expect("(")
        positive = self.alternatives()
        self.expect(").(#_#(")
        negative = self.alternatives()
        self.expect("))")
        if self.pos != len(self.text):
            raise self.error("the end of the rule")
        return RegexRule(positive, negative)


def parse_rule(text: str) -> RegexRule:
    """Parse the canonical bracketed form produced by format_rule.

    Raises
    ------
    InvalidRuleFormat
        Raised if the text does not follow the grammar.

    """
    return _RuleParser(text.strip()).rule()


def format_classifier(classifier: Classifier) -> str:
    """Human readable listing of the rules and their decoded patterns."""
    lines = []
    for i, rule in enumerate(classifier.rules, 1):
        pos, neg = decode(rule)
        lines.append("rule %d: %s" % (i, format_rule(rule)))
        lines.append("    positive: %s" % pos)
        if rule.negative.alternatives:
            lines.append("    negative: %s" % neg)
        else:
            lines.append("    negative: %s (empty, excludes nothing)" % neg)
    lines.append("accept: positive matches and negative does not, for any rule")
    return "\n".join(lines)


def rules_words(rules: Sequence[RegexRule]) -> FrozenSet[str]:
    """Every word used by the rules."""
    return frozenset(
        w
        for rule in rules
        for outer in (rule.positive, rule.negative)
        for chain in outer
        for element in chain.elements
        for w in atom_words(element)
    )
