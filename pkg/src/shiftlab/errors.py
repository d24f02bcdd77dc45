"""Exception hierarchy shared across the package.

Two error families matter to callers.  ``InputFormatError`` covers anything
wrong with serialized data or command-line syntax.  ``MathPreconditionError``
covers violated mathematical preconditions (bad characteristic, singular
matrix, a face family that is not closed under taking subsets, ...).  The
command-line driver maps the former to exit code 2 and the latter to exit
code 3.  ``InternalError`` signals a broken internal invariant, never bad
user input.
"""

__all__ = [
    "ShiftlabError",
    "InputFormatError",
    "MathPreconditionError",
    "InvalidCharacteristicError",
    "MatrixNotInvertibleError",
    "NotClosedError",
    "InternalError",
]


class ShiftlabError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(ShiftlabError, ValueError):
    """Malformed serialized input or unparsable command-line value."""


class MathPreconditionError(ShiftlabError, ValueError):
    """A documented mathematical precondition does not hold."""


class InvalidCharacteristicError(MathPreconditionError):
    """Characteristic must be zero or a prime number."""


class MatrixNotInvertibleError(MathPreconditionError):
    """Operation requires an invertible matrix."""


class NotClosedError(MathPreconditionError):
    """A family of faces is not closed under taking subsets.

    Carries a witness face whose subset is missing.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalError(ShiftlabError):
    """An internal consistency check failed; indicates a bug, not bad input."""
