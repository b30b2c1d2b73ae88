"""Exception hierarchy shared by all modules."""


class WordMapError(Exception):
    """Base class for every error raised by :mod:`wordmaps`."""


class InvalidInput(WordMapError, ValueError):
    """Malformed or inconsistent user input (bad cycle notation, rank or degree mismatch, ...)."""


class BudgetExceeded(WordMapError):
    """An exhaustive computation would need more evaluations (or elements) than allowed."""


class InternalContradiction(WordMapError, AssertionError):
    """A construction produced an object that fails its own invariants.

    This signals a bug, not bad input: the preconditions were checked and
    the construction is guaranteed to succeed when they hold.
    """


class CoveringError(WordMapError):
    """Some non-trivial conjugacy class never covers the group, so cn(G) is undefined."""
