class DimensionMismatch(ValueError):
    pass


class ValidationError(ValueError):
    """A state failed one of its invariants.

    ``invariant`` names the failed condition and ``magnitude`` measures how
    badly it failed.
    """

    invariant = "invalid"

    def __init__(self, message: str, magnitude: float = float("nan")):
        super().__init__(message)
        self.magnitude = magnitude


class NotHermitian(ValidationError):
    invariant = "hermitian"


class NotPSD(ValidationError):
    invariant = "psd"


class TraceNotOne(ValidationError):
    invariant = "trace"


class NotNormalized(ValidationError):
    invariant = "norm"


class NotUnitary(ValueError):
    pass


class NotDecomposable(ValueError):
    """The operator is not (numerically) a tensor product."""

    def __init__(self, message: str, ratio: float):
        super().__init__(message)
        self.ratio = ratio
