"""Exception hierarchy shared across the package."""


class QuadlatError(Exception):
    """Base class for all errors raised by quadlat."""


class InvalidFieldError(QuadlatError, ValueError):
    """d does not define a real quadratic field (d <= 1 or not squarefree)."""


class FieldMismatchError(QuadlatError, ValueError):
    pass


class NotIntegralError(QuadlatError, ValueError):
    """An element of Q(sqrt d) was expected to lie in the ring of integers."""


class NotSymmetricError(QuadlatError, ValueError):
    pass


class NotPositiveDefiniteError(QuadlatError, ValueError):
    pass


class ClassicalityError(QuadlatError, ValueError):
    """Gram entries violate the classic (or half-integral non-classic) convention."""


class DimensionError(QuadlatError, ValueError):
    pass


class NotTotallyPositiveError(QuadlatError, ValueError):
    pass


class BoundDomainError(QuadlatError, ValueError):
    """Arguments outside the domain of a determinant bound (N <= 1, |entry| > N, ...)."""


class EscalationError(QuadlatError):
    """Escalation to an independent quadruple failed; ``stage`` names the failing step."""

    def __init__(self, message, stage, datum=None):
        super().__init__(message)
        self.stage = stage
        self.datum = datum


class MissingNormError(EscalationError):
    def __init__(self, n):
        super().__init__(f"lattice does not represent {n}", "represent", n)
        self.n = n


class IntegralityFailure(EscalationError):
    def __init__(self, pair, value):
        super().__init__(
            f"B(v_{pair[0]}, v_{pair[1]}) = {value} is not a rational integer",
            "integrality",
            pair,
        )
        self.pair = pair
        self.value = value


class HypothesisViolation(QuadlatError):
    """A hypothesis required by a proof step does not hold for the given data."""

    def __init__(self, message, stage="", datum=None):
        super().__init__(message)
        self.stage = stage
        self.datum = datum


class BlockError(QuadlatError, ValueError):
    """An 8x8 block assembly violates its structural invariants."""


class LatticeFileError(QuadlatError, ValueError):
    """Malformed lattice document; ``position`` locates the offending datum."""

    def __init__(self, message, position=""):
        super().__init__(f"{position}: {message}" if position else message)
        self.position = position
