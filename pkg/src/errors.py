"""Exception types raised by the library and mapped to CLI exit codes."""


class HodgeError(ValueError):
    """Base class for all domain errors.

    Subclasses ValueError so callers that only guard against bad values keep working.
    """

    exit_code = 4


class ParseError(HodgeError):
    """Malformed polynomial text or problem file."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column})" if column is not None else ")")
        elif column is not None:
            location = f" (column {column})"
        super().__init__(f"{message}{location}")


class SmoothnessFailure(HodgeError):
    """The hypersurface failed the Jacobian-ring smoothness certificate."""

    exit_code = 3


class FixtureMismatch(HodgeError):
    """A recomputed fixture value differs from the recorded one."""

    exit_code = 5


class UnknownFixture(HodgeError):
    """No fixture is registered under the requested id."""


class DivisionByZero(HodgeError, ZeroDivisionError):
    """Inverting the zero element of a field."""


class DegreeMismatch(HodgeError):
    """Operands or constructions with incompatible degrees."""


class ArityMismatch(HodgeError):
    """Operands living in rings with a different number of variables."""


class NotDivisible(HodgeError):
    """Exact division left a nonzero remainder."""


class ZeroClass(HodgeError):
    """A cycle polynomial lies in the Jacobian ideal."""


class RootMismatch(HodgeError):
    """The given value is not a root of the binary form."""


class RootCollision(HodgeError):
    """The fake-point parameter coincides with a root of the binary form."""


class NonRationalRoots(HodgeError):
    """The binary form does not split into distinct rational linear factors."""


class SingularSystem(HodgeError):
    """A square linear system that should be invertible is singular."""


class NotInIdeal(HodgeError):
    """The polynomial is not in the Jacobian ideal."""


class NotInColonIdeal(HodgeError):
    """The polynomial does not multiply the cycle polynomial into the Jacobian ideal."""


class NotProductStructured(HodgeError):
    """The form is not a sum of binary forms in consecutive variable pairs."""


class InconsistentResult(HodgeError):
    """Two independent computations of the same quantity disagree."""
