"""Exception hierarchy.

The CLI maps each family to an exit code: input errors exit 1, unmet
theorem preconditions exit 2, failed internal verification exits 3.
"""


class SaddlePertError(Exception):
    exit_code = 1


class InputError(SaddlePertError, ValueError):
    """Malformed problem data: shapes, schema, non-metric tables."""

    exit_code = 1


class MetricError(InputError):
    """A distance table violates a metric axiom.

    ``kind`` is one of ``"shape"``, ``"nonfinite"``, ``"negative"``,
    ``"diagonal"``, ``"asymmetry"``, ``"separation"``, ``"triangle"``;
    ``where`` holds the offending index pair or triple.
    """

    def __init__(self, kind: str, where: tuple = (), message: str = ""):
        self.kind = kind
        self.where = tuple(where)
        super().__init__(message or f"{kind} violation at {self.where}")


class PreconditionError(SaddlePertError):
    """A hypothesis of the construction being requested does not hold."""

    exit_code = 2


class VerificationError(SaddlePertError, AssertionError):
    """A constructed object failed its own postcondition check. Always a bug."""

    exit_code = 3
