"""Exception hierarchy.

``InputError`` subclasses signal a problem with the caller's data (bad
shapes, violated hypotheses, points outside a function's domain); the CLI
maps them to exit code 1.  ``ConvergenceError`` means an iteration failed
to converge and maps to exit code 2.
"""


class RelconvexError(Exception):
    """Base class for all library errors."""


class InputError(RelconvexError):
    """Invalid input: wrong shape, value, or violated precondition."""


class DomainError(InputError):
    """A point lies outside the domain of the function under test."""


class DimensionMismatchError(InputError):
    """Operands live in spaces of different dimension."""


class MassMismatchError(InputError):
    """Total masses of two measures differ beyond tolerance."""


class HypothesisError(InputError):
    """A named hypothesis of an inequality is violated."""


class NotMajorizedError(InputError):
    """A certificate was requested for a pair that is not in relation."""


class ConvergenceError(RelconvexError):
    """An iterative method did not converge.

    ``best`` carries the final iterate so callers can inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
