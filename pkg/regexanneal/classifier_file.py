# -*- coding: utf-8 -*-
"""Read and write learned classifiers as INI files.

A classifier file holds a ``[classifier]`` section followed by one
``[rule N]`` section per rule, N starting at 1::

    [classifier]
    class = cough_child
    beta = 0.2
    seed = 7
    strategy = psaw
    rules = 1

    [rule 1]
    ast = ((fever|cough).{0,10}child).(#_#(adult))
    positive = .*(((fever|cough).{0,10}child)).*
    negative = .*((adult)).*

``ast`` is the bracketed form of the rule and is the only field read back;
``positive`` and ``negative`` hold the decoded patterns and must agree with
it.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import io
import os
from configparser import ConfigParser
from configparser import Error as ConfigParserError
from dataclasses import dataclass
from typing import Optional, Union

from .constants import DEFAULT_BETA, Strategy
from .errors import ClassifierFileError, InvalidRuleFormat
from .regex_model import Classifier, decode, format_rule, parse_rule

_HEADER = "classifier"
_RULE = "rule %d"


@dataclass(frozen=True)
class ClassifierFile:
    classifier: Classifier
    target_class: str
    beta: float = DEFAULT_BETA
    seed: Optional[int] = None
    strategy: Optional[Strategy] = None


def classifier_to_config(record: ClassifierFile) -> ConfigParser:
    parser = ConfigParser(interpolation=None)
    parser[_HEADER] = {"class": record.target_class, "beta": repr(float(record.beta))}
    if record.seed is not None:
        parser[_HEADER]["seed"] = str(record.seed)
    if record.strategy is not None:
        parser[_HEADER]["strategy"] = Strategy(record.strategy).value
    parser[_HEADER]["rules"] = str(len(record.classifier))
    for i, rule in enumerate(record.classifier.rules, 1):
        positive, negative = decode(rule)
        parser[_RULE % i] = {
            "ast": format_rule(rule),
            "positive": positive,
            "negative": negative,
        }
    return parser


def dumps_classifier(record: ClassifierFile) -> str:
    out = io.StringIO()
    classifier_to_config(record).write(out)
    return out.getvalue()


def write_classifier_file(
    record: ClassifierFile, path: Union[str, os.PathLike]
) -> None:
    """Write the classifier, the same record always giving the same bytes."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_classifier(record))


def read_classifier_file(path: Union[str, os.PathLike]) -> ClassifierFile:
    """Read a file written by write_classifier_file.

    Raises
    ------
    ClassifierFileError
        Raised if a section or a field is missing, if a rule cannot be
        parsed or if the stored patterns disagree with the rule.

    """
    path = os.fspath(path)
    parser = ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except (ConfigParserError, UnicodeDecodeError) as e:
        raise ClassifierFileError(path, str(e)) from e

    if not parser.has_section(_HEADER):
        raise ClassifierFileError(path, "missing [%s] section" % _HEADER)
    header = parser[_HEADER]
    try:
        target_class = header["class"]
        count = int(header["rules"])
        beta = float(header.get("beta", repr(DEFAULT_BETA)))
        seed = int(header["seed"]) if "seed" in header else None
        strategy = Strategy(header["strategy"]) if "strategy" in header else None
    except KeyError as e:
        raise ClassifierFileError(path, "missing field %s" % e) from e
    except ValueError as e:
        raise ClassifierFileError(path, str(e)) from e

    rules = []
    for i in range(1, count + 1):
        name = _RULE % i
        if not parser.has_section(name) or "ast" not in parser[name]:
            raise ClassifierFileError(path, "missing rule %d" % i)
        section = parser[name]
        try:
            rule = parse_rule(section["ast"])
        except InvalidRuleFormat as e:
            raise ClassifierFileError(path, "rule %d: %s" % (i, e)) from e
        stored = (section.get("positive"), section.get("negative"))
        if stored != (None, None) and stored != decode(rule):
            raise ClassifierFileError(
                path, "rule %d: stored patterns disagree with the rule" % i
            )
        rules.append(rule)

    expected = {_RULE % i for i in range(1, count + 1)}
    extra = [s for s in parser.sections() if s != _HEADER and s not in expected]
    if extra:
        raise ClassifierFileError(path, "unexpected sections: %s" % ", ".join(extra))

    return ClassifierFile(Classifier(tuple(rules)), target_class, beta, seed, strategy)
