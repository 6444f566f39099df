"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): usage problems,
where the input itself is wrong, and numerical problems, where a valid input
could not be evaluated.
"""


class FoxWrightError(Exception):
    pass


class UsageError(FoxWrightError, ValueError):
    """Malformed input, arity mismatch, or a violated precondition."""


class ParameterError(UsageError):
    pass


class ConstraintError(UsageError):
    pass


class ParseError(UsageError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class NumericalError(FoxWrightError, ArithmeticError):
    pass


class DomainError(NumericalError):
    """Argument outside the region where the quantity is defined."""


class RangeError(NumericalError):
    """Result not representable in double precision."""


class ConvergenceError(NumericalError):
    """Series stopping rule not met within the term budget."""
