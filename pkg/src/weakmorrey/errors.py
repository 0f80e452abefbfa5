"""Exception types shared across the package."""


class WeakMorreyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidExponentError(WeakMorreyError, ValueError):
    """An exponent or exponent system violates its admissibility constraints."""


class InvalidFunctionError(WeakMorreyError, ValueError):
    """A function expression has inadmissible parameters or mismatched dimensions."""


class ParseError(WeakMorreyError, ValueError):
    """A function spec string could not be parsed.

    Carries the character position at which parsing failed.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NoClosedFormError(WeakMorreyError):
    """No closed-form superlevel measure is available for this expression."""


class UnsupportedFunctionError(WeakMorreyError):
    """Every evaluation path for this function has been disabled by config."""


class DegenerateFactorError(WeakMorreyError, ValueError):
    """A split was requested with a vanishing factor weight."""


class ConstraintViolationError(WeakMorreyError, ValueError):
    """Supplied thresholds do not satisfy the product constraint."""


class NotInSpaceError(WeakMorreyError):
    """A function has infinite quasinorm in the requested space."""


class DegenerateFamilyError(WeakMorreyError):
    """A search family produced no candidate with finite, nonzero norms."""


class InconsistencyError(WeakMorreyError):
    """An inequality that is proven to hold failed numerically.

    This always indicates a bug somewhere: in the caller's inputs, in this
    package, or in floating point assumptions. It is never swallowed.
    """
