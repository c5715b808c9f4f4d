"""Exception types shared across the package."""


class DomainError(ValueError):
    """Evaluation point lies outside the closed unit disk."""


class PoleError(ArithmeticError):
    """Mobius denominator vanished (numerically) at the evaluation point."""


class CriticalPointError(ArithmeticError):
    """h' vanished, so the dilatation g'/h' is undefined there."""


class ConstructionError(ValueError):
    """Constructor arguments violate a type invariant."""


class HypothesisError(ValueError):
    """A required hypothesis of a verification operation is violated."""


class NonConvergenceError(ArithmeticError):
    """Refinement hit its cap with the error estimate still too large.

    Carries the last two refinement values so callers can report both.
    """

    def __init__(self, message: str, value: float, previous: float):
        super().__init__(message)
        self.value = value
        self.previous = previous


class BudgetError(ValueError):
    """A configured evaluation budget would be exceeded."""
