"""Exception and warning types shared across the library."""


class FHawkesError(Exception):
    """Base class for all library-specific errors."""


class DomainError(FHawkesError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AccuracyError(FHawkesError, ArithmeticError):
    """No evaluation regime could certify the requested accuracy, or two
    regimes disagree beyond tolerance at a hand-off boundary."""


class ContourError(FHawkesError, ArithmeticError):
    """A Laplace image evaluated non-finite on an inversion contour node."""


class QuadratureError(FHawkesError, ArithmeticError):
    """Adaptive quadrature failed to meet tolerance within its budget."""


class BudgetError(FHawkesError, RuntimeError):
    """A simulation exceeded its event budget (near-critical parameters)."""


class ConvergenceWarning(UserWarning):
    """A numerical inversion result changed more than expected under node
    doubling; the value is returned but should be treated with care."""
