"""Exception types shared by every module.

The CLI maps these onto exit codes: ``PreconditionError`` -> 1,
``CapExceeded`` -> 2.
"""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured size cap or work budget."""


class ExtractionFailure(AssertionError):
    """The coset descent found no admissible refinement.

    This should never happen; an instance carries the offending combination
    and is a counterexample candidate for the descent argument.
    """

    def __init__(self, message, combination=None):
        super().__init__(message)
        self.combination = combination
