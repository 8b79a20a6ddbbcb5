"""Exception and warning types shared across the package."""


class UnruhCoherenceError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(UnruhCoherenceError):
    """Ill-formed object construction: duplicate mode names, wrong region tags."""


class UnsupportedInputError(UnruhCoherenceError):
    """Input outside the modeled domain (e.g. occupation >= 2 in a Minkowski mode)."""


class ContractViolation(UnruhCoherenceError):
    """A precondition of the metric layer was violated (e.g. region-II mode present)."""


class ResourceBudgetError(UnruhCoherenceError):
    """A brute-force build would exceed the configured memory budget."""

    def __init__(self, message, dimension=None):
        super().__init__(message)
        self.dimension = dimension


class ConvergenceError(UnruhCoherenceError):
    """A series summation hit its term cap before reaching tolerance."""

    def __init__(self, message, achieved_bound=None, terms=None):
        super().__init__(message)
        self.achieved_bound = achieved_bound
        self.terms = terms


class TruncationCapWarning(UserWarning):
    """The hard Fock-level cap bound before the tail tolerance was met."""
