"""Exception types shared across the toolkit."""


class AmcError(Exception):
    """Base class for all toolkit errors."""


class CarrierError(AmcError, TypeError):
    """A value does not belong to the semiring's carrier set."""


class LabelingError(AmcError):
    """A labeling is incomplete or inconsistent with its semiring."""


class UnsupportedLiteralError(LabelingError):
    """A negative literal was labeled or queried under a positive-only semiring."""


class ParseError(AmcError, ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class StoreError(AmcError):
    """A diagram handle was used with a store it does not belong to."""


class BudgetError(AmcError):
    """An exhaustive computation would exceed its configured budget."""


class UnsoundError(AmcError):
    """Strict-mode refusal: the circuit class does not license the task."""
