"""Exception and warning types shared across the package."""


class SpecFunError(Exception):
    """Base class for special-function kernel failures."""


class PoleError(SpecFunError):
    """Gamma-type pole hit (argument at a non-positive integer)."""


class DegenerateDenominator(SpecFunError):
    """Lower hypergeometric parameter at a non-positive integer."""


class NonConvergence(SpecFunError):
    """Neither the power series nor the asymptotics met tolerance."""


class DivergentSeriesError(SpecFunError):
    """Series diverges for the requested argument (e.g. 2F0 at z != 0).

    Carries the optimal-truncation partial sum as an informative diagnosis.
    """

    def __init__(self, message, partial_sum=None, terms_used=0, estimate=float("inf")):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms_used = terms_used
        self.estimate = estimate


class DomainError(ValueError):
    """Evaluation point outside the system's domain."""


class ComplexSeedWarning(UserWarning):
    """Zero scan requested for a genuinely complex seed; scan is skipped."""


class AnnihilatedSeed(ValueError):
    """A ladder application produced the identically zero function."""


class SingularTransform(ValueError):
    """Transformation function (or key function) vanishes on the grid."""

    def __init__(self, message, zeros=()):
        super().__init__(message)
        self.zeros = tuple(zeros)


class SingularWronskian(SingularTransform):
    """A chain Wronskian vanishes inside the working window."""


class ForbiddenW0(ValueError):
    """Confluent shift w0 inside the interval where w(x) acquires a zero."""


class ExcludedEnergy(ValueError):
    """Factorization energy on the excluded set of the inverted oscillator."""


class NonLadderedChain(ValueError):
    """Operation requires a chain connected by the annihilation operator."""


class SingularExtremalState(SingularTransform):
    """Extremal-state denominator vanishes inside the requested window."""


class SingularPoint(ValueError):
    """Residual grid contains a pole of the solution."""


class UnsupportedClosedForm(KeyError):
    """No printed closed form for the requested hierarchy parameters."""


class NegativeParameter(ValueError):
    """Gamma argument in a coefficient formula is a non-positive integer."""


class QuadratureFailure(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class CoefficientPole(ValueError):
    """Painleve V residual requested at a pole of the equation coefficients."""
