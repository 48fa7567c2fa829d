"""Exception hierarchy shared by the solver modules and the CLI."""

from typing import Any


class PotError(Exception):
    """Base class for every error raised by potsolver."""


class InputError(PotError, ValueError):
    """Invalid variable index, size, selector or otherwise malformed input."""


class ParseError(InputError):
    """Instance or model text that does not follow the file grammar.

    Attributes:
        line: 1-based line number of the offending line (0 when the problem
            is not tied to a single line, e.g. a missing header)
    """

    def __init__(self, message: str, line: int = 0):
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(f"{prefix}{message}")
        self.message = message

    def __reduce__(self):
        return (self.__class__, (self.message, self.line))


class ContractViolation(PotError):
    """A documented precondition of an operation does not hold."""


class ResourceLimitError(PotError):
    """A size guard refused to start an exponential computation."""


class SolveTimeout(PotError):
    """Search exceeded its deadline.

    Attributes:
        stats: statistics collected up to the moment the deadline fired
    """

    def __init__(self, message: str, stats: Any = None):
        self.stats = stats
        super().__init__(message)

    def __reduce__(self):
        return (self.__class__, (str(self), self.stats))
