class KuiperException(Exception):
    """
    An exception for kuiper_isometry specific errors. Use python exceptions where it makes more sense (e.g. TypeError
    on wrong argument types).
    """
    pass


class ValidationError(KuiperException):
    "An input or an intermediate object violates the invariants of its type"
    pass


class MassDeficiencyError(ValidationError):
    """
    A pullback lost mass because the measure has an atom at a point the map never reaches.
    """

    def __init__(self, point, mass):
        self.point = point
        self.mass = mass
        super().__init__(
            f"not a probability measure: mass mu(R\\{{{point}}}) = {1 - mass} < 1 (atom at exceptional point {point})"
        )


class RepresentationError(ValidationError):
    "The result of an operation is not piecewise-Moebius"
    pass


class NullIntervalError(KuiperException):
    "conditioning on null interval"
    pass


class DiracInputError(KuiperException):
    "A Dirac measure was passed where the non-Dirac characterisation is required"
    pass


class AtomicInputError(KuiperException):
    "A measure with atoms was passed to an operation defined on continuous measures"
    pass


class OracleError(KuiperException):
    "A map oracle failed its inverse or orientation probe"
    pass


class PreconditionError(KuiperException):
    "A documented precondition of an operation does not hold"
    pass


class IdenticallyZeroError(KuiperException):
    "The quadratic a*t^2 + b*t + c is identically zero, every t is a root"
    pass


class UnknownSuiteError(KuiperException):
    "An unknown verification suite was requested"
    pass
