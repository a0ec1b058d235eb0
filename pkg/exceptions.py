"""Exception hierarchy shared by every package.

Library code raises these; the command layer in ``cli.tools`` turns them into
error dictionaries and ``main`` turns those into exit codes.
"""


class PCanonError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InvalidInputError(PCanonError):
    """A word, weight, partition or precondition was rejected."""

    exit_code = 2


class NonFinitaryError(InvalidInputError):
    """A parabolic subset generates an infinite group."""


class ConstraintError(InvalidInputError):
    """The m-vector violates the congruence or size conditions."""


class CacheCorruptionError(PCanonError):
    exit_code = 3


class ConsistencyError(PCanonError):
    """An internal identity failed: negative residual, top multiplicity, label rule."""

    exit_code = 4


class IntegralityError(ConsistencyError):
    """A denominator survived where a polynomial was expected."""
