"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ColombeauError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ColombeauError, ValueError):
    """An operation was applied outside the domain where it is defined."""


class NotNearStandard(DomainError):
    """The generalized number has no standard part along the full net."""


class NotInvertible(DomainError):
    """Some branch is zero or its leading term is unknown."""


class NumericError(ColombeauError, ArithmeticError):
    """A numerical procedure (quadrature, fitting) failed to converge."""


class ParseError(ColombeauError, ValueError):
    """A literal could not be parsed; carries the offending position."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        if text:
            message = f"{message} at position {pos}: {text!r}\n{' ' * (pos + 1)}^"
        super().__init__(message)


class Undecided(ColombeauError):
    """A verdict is hidden behind a tail of unknown coefficients.

    ``order`` is the tail exponent that blocked the decision.
    """

    def __init__(self, message: str, order=None):
        self.order = order
        super().__init__(message)


class UnknownSign(Undecided):
    """The leading sign of some branch lies beyond its known terms."""
