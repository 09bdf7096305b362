"""Exception types shared across the package."""


class StarIfsError(Exception):
    """Base class for all starifs errors."""


class DomainError(StarIfsError, ValueError):
    """An argument lies outside its documented domain."""


class ValidationError(StarIfsError, ValueError):
    """A structural invariant does not hold."""


class PreconditionError(StarIfsError, ValueError):
    """A documented operation precondition is not met."""


class WeightError(StarIfsError, ValueError):
    """The weight vector of an IFS does not attain maximum 1."""


class NotAContractionError(StarIfsError, ValueError):
    """A map's estimated contraction constant is >= 1."""


class CoverageError(StarIfsError, ValueError):
    """An affine map sends grid points too far outside the grid's hull."""


class ResourceBudgetError(StarIfsError, RuntimeError):
    """An enumeration would exceed the configured budget."""


class ConfigError(StarIfsError, ValueError):
    """A run configuration failed to parse or validate."""
