"""Exception hierarchy shared by every module.

Each error carries a short machine-readable code (rendered by the CLI as
``error[CODE]: message``) and the process exit status it maps to.
"""


class FrobgenError(Exception):
    code = "E_INTERNAL"
    exit_status = 4


class InvalidPrime(FrobgenError):
    """The modulus is not a prime in the supported range."""

    code = "E_PRIME"
    exit_status = 2


class UnsupportedPrime(FrobgenError):
    """The prime is valid but the requested operation excludes it."""

    code = "E_PRIME"
    exit_status = 2


class ContextMismatch(FrobgenError):
    """Operands belong to different (p, d) contexts."""

    code = "E_CONTEXT"
    exit_status = 2


class DivisionByZero(FrobgenError):
    code = "E_DIVZERO"
    exit_status = 2


class ParseError(FrobgenError):
    """Polynomial text did not match the grammar; carries the offset."""

    code = "E_PARSE"
    exit_status = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NotAPnPower(FrobgenError):
    code = "E_ROOT"
    exit_status = 2


class ZeroInput(FrobgenError):
    code = "E_ZERO"
    exit_status = 2


class ConstantInput(FrobgenError):
    code = "E_CONSTANT"
    exit_status = 2


class InvalidInput(FrobgenError):
    code = "E_INPUT"
    exit_status = 2


class DegreeBoundViolation(FrobgenError):
    code = "E_DEGREE"
    exit_status = 2


class ResourceLimit(FrobgenError):
    """A configured cap (exponent size or term count) was exceeded."""

    code = "E_RESOURCE"
    exit_status = 3


class LevelExceeded(FrobgenError):
    """The ideal chain did not repeat within the allowed number of levels."""

    code = "E_LEVEL"
    exit_status = 3

    def __init__(self, max_level, message=None, levels=None):
        super().__init__(message or f"no consecutive equal ideals up to level {max_level}")
        self.max_level = max_level
        self.levels = levels or []  # the chain computed before giving up


class InternalError(FrobgenError):
    """An invariant that the algorithms guarantee was observed to fail."""

    code = "E_INTERNAL"
    exit_status = 4
