"""Exception hierarchy shared by all modules."""


class ReciprocityError(Exception):
    """Base class for every error raised by reciplab."""


class DomainError(ReciprocityError, ValueError):
    """An operation was applied outside its mathematical domain (e.g. 1/0)."""


class PreconditionError(ReciprocityError, ValueError):
    """A documented precondition of an operation does not hold."""


class UnsupportedInputError(ReciprocityError, ValueError):
    """The input is mathematically valid but outside the supported scope."""


class NotFoundError(ReciprocityError, LookupError):
    """A bounded search finished without a result; raise the bound and retry."""


class ConfigError(ReciprocityError, ValueError):
    """A field, character or run configuration is malformed."""


class CorruptDataError(ReciprocityError, ValueError):
    """A dataset violates its structural invariants."""


class ReconstructionError(ReciprocityError):
    """Reconstruction failed; ``report`` carries the diagnostics gathered so far."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report if report is not None else {}


class NotAbelianCompatibleError(ReconstructionError):
    """Exponent-tuple multisets differ between records."""


class FinitePartNotFoundError(ReconstructionError):
    """No finite-order character in the configured search space fits the data."""


class AmbiguousFinitePartError(ReconstructionError):
    """Several finite-order characters fit the data; all are listed in ``report``."""


class MultiplicityMismatchError(ReconstructionError):
    """No perfect matching exists between two tuple multisets."""

    def __init__(self, message, index, report=None):
        super().__init__(message, report)
        self.index = index
