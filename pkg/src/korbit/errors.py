"""Exception types shared across the package."""


class KorbitError(Exception):
    """Base class for errors raised by this package."""


class DomainError(KorbitError, ValueError):
    """A family parameter or input violates its stated domain constraint."""


class EvaluationError(KorbitError, ArithmeticError):
    """An orbit equation cannot be evaluated at the given point.

    Raised when a power or logarithm argument that must be positive is not,
    e.g. s/sigma <= 0 for a constraint containing (s/sigma)**lam.
    """


class AsymmetryError(KorbitError, RuntimeError):
    """Mutual orbit-membership checks disagreed.

    orbits_equal requires is_member in both directions to give the same
    answer; a disagreement indicates a descriptor bug or a tolerance
    pathology and is surfaced instead of being silently collapsed.
    """


class ParameterWarning(UserWarning):
    """Parameters that are accepted but degrade some downstream operation."""
