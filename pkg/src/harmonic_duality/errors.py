"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands live in exterior algebras of different ambient dimension."""


class DegreeError(ValueError):
    """A covector or form has a degree incompatible with the operation."""


class DomainError(ValueError):
    """A field was evaluated outside its domain of definition."""


class ProximityError(DomainError):
    """An evaluation point is too close to a quadrature surface."""

    def __init__(self, message, distance=None, minimum=None):
        super().__init__(message)
        self.distance = distance
        self.minimum = minimum


class UnsupportedDimensionError(ValueError):
    """The ambient dimension is outside the supported range."""


class NodeEvaluationError(RuntimeError):
    """An integrand failed at a quadrature node."""

    def __init__(self, index, message):
        super().__init__(f"integrand failed at node {index}: {message}")
        self.index = index
