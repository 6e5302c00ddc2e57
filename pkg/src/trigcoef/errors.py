"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TrigcoefError(Exception):
    """Base class for all errors raised by trigcoef."""


class EvaluationFailure(TrigcoefError, ArithmeticError):
    """A function handle could not produce a value at the requested point."""

    def __init__(self, message: str, x: float | None = None):
        super().__init__(message)
        self.x = x


class QuadratureFailure(TrigcoefError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance within the budget."""

    def __init__(self, message: str, value: float = float("nan"), error: float = float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class CoincidentNodes(TrigcoefError, ValueError):
    """Divided-difference nodes coincide (or nearly coincide)."""


class DegreeOverflow(TrigcoefError, ValueError):
    """Formal integration would push the polynomial part past degree 2."""


class NonSummableAtPoint(TrigcoefError, ArithmeticError):
    """The infinite tail cannot be summed (or bounded) at this point."""


class InfiniteTailWithoutRule(TrigcoefError, ValueError):
    """An infinite sum was requested but the tail carries no usable generator."""


class SingularWindow(TrigcoefError, ValueError):
    """A flagged singular point lies in the window a quadrature needs."""


class SingularPointInside(TrigcoefError, ValueError):
    """A flagged singular point lies inside an integration interval."""


class EvenPartNeedsCenter(EvaluationFailure):
    """The even part at x needs G(x), which is undefined."""


class DensityTooLow(TrigcoefError, ArithmeticError):
    """The restricting set does not have density close to 1 at the point."""


class NonConvergentBracket(TrigcoefError, ArithmeticError):
    """The limit defining the patched divided difference did not settle."""

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class BudgetExhausted(TrigcoefError, ArithmeticError):
    """A term budget ran out; ``partial`` carries whatever was computed."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
