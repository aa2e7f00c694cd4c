# -*- coding: utf-8 -*-
"""Exceptions hierarchy used across the package.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

from typing import Iterable, Optional, Tuple

from typing_extensions import Self


class Error(Exception):
    """Abstract basic exception class for this module."""

    pass


class CorpusFormatError(Error, ValueError):
    """Exception raised when a corpus record cannot be parsed."""

    def __init__(self, path: str, line_number: int, reason: str) -> None:
        super(CorpusFormatError, self).__init__(
            "%s, line %d: %s" % (path, line_number, reason)
        )
        self.path = path
        self.line_number = line_number
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str, int, str]]:
        """Store the location and the reason when pickling."""
        return (CorpusFormatError, (self.path, self.line_number, self.reason))


class EmptyCorpusError(Error, ValueError):
    """Exception raised when a corpus file holds no record."""

    def __init__(self, path: str) -> None:
        super(EmptyCorpusError, self).__init__("%s contains no document" % path)
        self.path = path

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the path when pickling."""
        return (EmptyCorpusError, (self.path,))


class UnknownClassError(Error, KeyError):
    """Exception raised when a target class is absent from a corpus."""

    def __init__(self, class_name: str, known: Iterable[str] = ()) -> None:
        self.class_name = class_name
        self.known = tuple(sorted(known))
        super(UnknownClassError, self).__init__(class_name)

    def __str__(self) -> str:
        return "Unknown class %r. Known classes are: %s" % (
            self.class_name,
            ", ".join(self.known) or "none",
        )

    def __reduce__(self) -> Tuple[type, tuple]:
        """Store the class name and the known classes when pickling."""
        return (UnknownClassError, (self.class_name, self.known))


class SyntheticSpecError(Error, ValueError):
    """Exception raised when a synthetic corpus specification is inconsistent."""

    def __init__(self, reason: str) -> None:
        super(SyntheticSpecError, self).__init__(
            "Invalid synthetic corpus specification: " + reason
        )
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the reason when pickling."""
        return (SyntheticSpecError, (self.reason,))


class EmbeddingFormatError(Error, ValueError):
    """Exception raised when an embedding file is malformed."""

    def __init__(self, path: str, line_number: int, reason: str) -> None:
        super(EmbeddingFormatError, self).__init__(
            "%s, line %d: %s" % (path, line_number, reason)
        )
        self.path = path
        self.line_number = line_number
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str, int, str]]:
        """Store the location and the reason when pickling."""
        return (EmbeddingFormatError, (self.path, self.line_number, self.reason))


class OutOfVocabularyError(Error, KeyError):
    """Exception raised when a word has no vector in an embedding table."""

    def __init__(self, word: str) -> None:
        super(OutOfVocabularyError, self).__init__(word)
        self.word = word

    def __str__(self) -> str:
        return "%r is out of the embedding vocabulary" % self.word

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the word when pickling."""
        return (OutOfVocabularyError, (self.word,))


class InvalidExpression(Error, ValueError):
    """Exception raised when an expression tree cannot be turned into a rule."""

    def __init__(self, reason: str) -> None:
        super(InvalidExpression, self).__init__(reason)
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the reason when pickling."""
        return (InvalidExpression, (self.reason,))


class InvalidRuleFormat(Error, ValueError):
    """Exception raised when the bracketed form of a rule cannot be parsed."""

    def __init__(self, msg: str) -> None:
        super(InvalidRuleFormat, self).__init__(msg)
        self.msg = msg

    @classmethod
    def bad_syntax(
        cls, text: str, position: int, expected: Optional[str] = None
    ) -> Self:
        """Build an exception when the rule text cannot be parsed."""
        if expected:
            msg = "Expected %s at position %d." % (expected, position)
        else:
            msg = "Unexpected character at position %d." % position

        return cls("Could not parse %r. %s" % (text, msg))

    def __str__(self) -> str:
        return self.msg

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the message when pickling."""
        return (InvalidRuleFormat, (self.msg,))


class ClassifierFileError(Error, ValueError):
    """Exception raised when a classifier file is malformed."""

    def __init__(self, path: str, reason: str) -> None:
        super(ClassifierFileError, self).__init__("%s: %s" % (path, reason))
        self.path = path
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str, str]]:
        """Store the path and the reason when pickling."""
        return (ClassifierFileError, (self.path, self.reason))


class EvaluationError(Error, ValueError):
    """Exception raised when metrics are requested on an invalid dataset."""

    def __init__(self, reason: str) -> None:
        super(EvaluationError, self).__init__(reason)
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the reason when pickling."""
        return (EvaluationError, (self.reason,))


class ConfigurationError(Error, ValueError):
    """Exception raised when a configuration value is invalid."""

    def __init__(self, reason: str) -> None:
        super(ConfigurationError, self).__init__(reason)
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the reason when pickling."""
        return (ConfigurationError, (self.reason,))


class NoDiscriminativeVocabulary(Error):
    """Exception raised when no keyword separates a class from the others."""

    def __init__(self, target_class: str) -> None:
        super(NoDiscriminativeVocabulary, self).__init__(
            "class %r has no discriminative vocabulary" % target_class
        )
        self.target_class = target_class

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the class name when pickling."""
        return (NoDiscriminativeVocabulary, (self.target_class,))


class MutationError(Error):
    """Exception raised when no neighbourhood operator can be applied."""

    def __init__(self, reason: str) -> None:
        super(MutationError, self).__init__(reason)
        self.reason = reason

    def __reduce__(self) -> Tuple[type, Tuple[str]]:
        """Store the reason when pickling."""
        return (MutationError, (self.reason,))
