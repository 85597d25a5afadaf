"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad input: out-of-range index, mismatched field, unparsable text."""


class ParameterError(UsageError):
    """A coefficient set violates the hypotheses of a parameter system."""


class SingularMatrixError(ArithmeticError):
    pass


class RewriteBudgetExceeded(RuntimeError):
    """The rewriting engine exceeded its step budget (indicates a rule-ordering bug)."""
