"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedError(DomainError):
    """A family parameter is too small for the requested moment or generator order."""


class DegenerateWindowError(DomainError):
    """The truncation window carries (numerically) zero probability mass."""


class QuadratureAccuracyError(ArithmeticError):
    """Quadrature failed to reach its tolerance.

    The best estimate reached so far is kept on ``estimate`` and the
    achieved error bound on ``error``.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
