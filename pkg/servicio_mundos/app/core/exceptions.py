"""Custom exceptions for the worlds toolkit."""


class WorldsError(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigurationError(WorldsError):
    """Raised when settings or an experiment config are invalid."""

    pass


class DimensionMismatchError(WorldsError):
    """Raised when operands do not share a dimension."""

    pass


class NonFiniteError(WorldsError):
    """Raised when a vector or matrix holds NaN or Inf entries."""

    pass


class NotHermitianError(WorldsError):
    """Raised when an operator is not self-adjoint within tolerance."""

    pass


class NotUnitaryError(WorldsError):
    """Raised when an operator is not unitary within tolerance."""

    pass


class NotNormalizedError(WorldsError):
    """Raised when a ket used as a state has norm different from one."""

    pass


class NotOrthonormalError(WorldsError):
    """Raised when a basis fails the Gram check."""

    pass


class IncompleteBasisError(NotOrthonormalError):
    """Raised when a basis has fewer vectors than the dimension."""

    pass


class LinearDependenceError(NotOrthonormalError):
    """Raised when a vector lies in the span of the ones before it."""

    pass


class DegenerateSpectrumError(WorldsError):
    """Raised when an operator has no unique eigenworld."""

    pass


class WorldMismatchError(WorldsError):
    """Raised when an observable or state is used outside its world."""

    pass


class IndexOutOfRangeError(WorldsError):
    """Raised when a basis index lies outside [0, dim)."""

    pass


class InvalidWeightsError(WorldsError):
    """Raised when state weights leave the probability simplex."""

    pass


class InvalidSequenceError(WorldsError):
    """Raised when an almost-convergent representation is malformed."""

    pass


class NonConvergenceError(WorldsError):
    """Raised when the envelope solver exhausts its budget."""

    def __init__(self, message: str, result=None, details: dict | None = None):
        super().__init__(message, details)
        self.result = result


class DocumentError(WorldsError):
    """Raised when a persisted document cannot be read."""

    pass
