"""Exception hierarchy shared by every module.

``ParseError`` subclasses map to CLI exit code 2, ``DomainError``
subclasses to exit code 1.
"""

from __future__ import annotations


class FoxCoverError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FoxCoverError):
    """Malformed text input. Carries a 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PresentationSyntaxError(ParseError):
    pass


class UnknownGenerator(ParseError):
    pass


class MalformedExponent(ParseError):
    pass


class DomainError(FoxCoverError):
    """Well-formed input that violates a mathematical precondition."""


class NotCyclicallyReduced(DomainError):
    pass


class TooLarge(DomainError):
    pass


class InsufficientFreeRank(DomainError):
    pass


class RelatorNotKilled(DomainError):
    def __init__(self, relator_index: int, relator_text: str = ""):
        self.relator_index = relator_index
        detail = f" ({relator_text})" if relator_text else ""
        super().__init__(f"relator {relator_index}{detail} does not map to the identity permutation")


class NotTransitive(DomainError):
    pass


class DegenerateParameters(DomainError):
    pass


class NotOneRelator(DomainError):
    pass


class PreconditionFailed(DomainError):
    pass
