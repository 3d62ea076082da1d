"""Exception hierarchy. The CLI maps these onto exit codes."""


class CosetResonanceError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInputError(CosetResonanceError, ValueError):
    """Bad user input (CLI exit code 2)."""


class ModulusError(InvalidInputError):
    """Modulus is not a prime >= 3."""


class UnitRequiredError(InvalidInputError):
    """Argument must be a unit modulo q."""


class DomainError(InvalidInputError):
    """Argument outside the supported domain of a special function."""


class PrimitivityRequiredError(InvalidInputError):
    """Operation needs a primitive (non-principal) character."""


class ConfigurationError(InvalidInputError):
    """Inconsistent experiment parameters, e.g. resonator support N >= q."""


class DegenerateInputError(InvalidInputError):
    """Zero resonator or similar degenerate object."""


class BudgetError(CosetResonanceError):
    """Requested work exceeds the configured budget (CLI exit code 3)."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InvariantViolation(CosetResonanceError, AssertionError):
    """A mathematical invariant failed at report time."""
