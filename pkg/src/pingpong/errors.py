"""Exception types shared across the package."""

from __future__ import annotations


class PingPongError(Exception):
    """Base class for every error raised by this package."""


class NegativeValuation(PingPongError, ValueError):
    pass


class SingularMatrix(PingPongError, ArithmeticError):
    pass


class ZeroVector(PingPongError, ValueError):
    pass


class DimensionMismatch(PingPongError, ValueError):
    pass


class MembershipViolation(PingPongError, ValueError):
    pass


class UnknownRoot(PingPongError, KeyError):
    pass


class InvalidCocharacter(PingPongError, ValueError):
    pass


class NotNormalized(PingPongError, ValueError):
    pass


class DuplicateGamma(PingPongError, ValueError):
    pass


class InvalidWitness(PingPongError, ValueError):
    pass


class Unreachable(PingPongError, RuntimeError):
    """A search with a proven bound ran out; this is a bug, not bad input."""


class Exhausted(PingPongError):
    """A randomized search used its whole budget without success.

    ``attempts`` holds one diagnostic entry per trial.
    """

    def __init__(self, message: str, attempts: list | None = None):
        super().__init__(message)
        self.attempts = attempts or []


class WordSyntaxError(PingPongError, ValueError):
    """Parse failure; ``position`` is 1-based."""

    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position
        self.reason = message
