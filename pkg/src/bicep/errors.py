"""Exception types raised by the library."""


class BicepError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(BicepError, ValueError):
    """An argument violates an operation's preconditions."""


class InvalidDistributionError(InvalidInputError):
    """A probability vector is negative somewhere or does not sum to one."""


class DataFileError(BicepError):
    """A price file could not be read or parsed.

    ``problems`` holds ``(row, reason)`` pairs; ``row`` is the 1-based line
    number in the file, or ``None`` for file-level problems.
    """

    def __init__(self, path, problems):
        self.path = str(path)
        self.problems = list(problems)
        lines = [f"{self.path}:"]
        for row, reason in self.problems:
            where = f"row {row}" if row is not None else "file"
            lines.append(f"  {where}: {reason}")
        super().__init__("\n".join(lines))


class InvariantViolation(BicepError):
    """An internal consistency check failed; indicates a bug."""
