"""Exception hierarchy.

Input problems (bad shapes, non-Hermitian data, non-monotone functions) derive
from :class:`InputError`; failures of the numerics from :class:`NumericError`.
The CLI maps these families onto exit codes.
"""


class SpecOrderError(Exception):
    pass


class InputError(SpecOrderError, ValueError):
    pass


class NumericError(SpecOrderError, ArithmeticError):
    pass


class DimMismatch(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotPSD(InputError):
    pass


class InvalidProjection(InputError):
    pass


class InvalidContext(InputError):
    pass


class InvalidFamily(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid spectral family")


class NotInContext(InputError):
    pass


class NotMonotone(InputError):
    pass


class NotAbstractQObservable(InputError):
    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = f"condition {condition} violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NonFiniteValue(InputError):
    pass


class TooManyAtoms(SpecOrderError):
    pass


class NoConvergence(NumericError):
    pass


class InternalInvariantViolation(NumericError):
    pass


class NotComplete(SpecOrderError):
    pass


class NoAdjoint(SpecOrderError):
    pass


class NotFound(SpecOrderError, LookupError):
    pass
