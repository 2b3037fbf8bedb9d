class DomainError(ValueError):
    """An input lies outside the domain of the requested operation."""


class NormalizationError(DomainError):
    """The superposition norm fell below the floor; the state is numerically null."""


class ConfigurationError(ValueError):
    """A discretization parameter violates a bound required for a trustworthy result."""


class NullConditionError(RuntimeError):
    """Conditioning on an event of (numerically) zero probability."""


class NoOptimumError(RuntimeError):
    """The objective is flat over the search bracket."""
