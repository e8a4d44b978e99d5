"""Exception hierarchy shared by all modules."""


class SymLevyError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(SymLevyError, ValueError):
    """Invalid model, distribution or contract parameters."""


class DomainError(ParameterError):
    """A function was evaluated outside its domain (e.g. ``psi(v)`` for ``v <= -lambda``)."""


class NoNaturalEmmError(SymLevyError):
    """No natural equivalent martingale measure exists.

    Raised for continuous-time pure-jump models when ``mu >= r``: under any
    natural measure ``E_Q[exp(Y_1)] >= exp(mu)`` by Jensen's inequality, so the
    martingale condition ``E_Q[exp(Y_1)] = exp(r)`` cannot be met.
    """


class IntegrationError(SymLevyError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate=float("nan"), error=float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class RootFindingError(SymLevyError, ArithmeticError):
    """Root bracket is invalid or the solver failed."""


class MeasureChangeError(SymLevyError):
    """The integrability condition of a Levy-preserving measure change fails."""
