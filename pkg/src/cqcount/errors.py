"""Exception types shared across the library.

The command line maps these onto exit codes: InputError -> 1,
ResourceBudgetError -> 2. InternalError signals a bug in the library
itself and is never caught.
"""


class CQError(Exception):
    """Base class for all library errors."""


class InputError(CQError):
    """Malformed or inconsistent input (bad vocabulary, unknown element, ...)."""


class ResourceBudgetError(CQError):
    """A configured search or enumeration budget was exceeded.

    Distinct from any answer: counts are always exact, never truncated,
    so running out of budget is an error, not an approximation.
    """


class InternalError(CQError):
    """An internal invariant failed; indicates a bug, not bad input."""
