"""Exception hierarchy for mckay-cli.

Every error the CLI can report carries the process exit code it maps to,
so `cli.main` converts exceptions to exit codes in one place.
"""


class McKayError(Exception):
    exit_code = 1


class ValidationError(McKayError, ValueError):
    """Malformed input: bad file, bad literal, mismatched shapes or fields."""

    exit_code = 2


class PreconditionError(McKayError):
    """Input is well-formed but violates a mathematical precondition."""

    exit_code = 3


class ResourceCapError(McKayError):
    exit_code = 4


class InvariantViolation(McKayError, ArithmeticError):
    """An internal consistency check failed. Always a bug."""

    exit_code = 70
