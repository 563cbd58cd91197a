"""Exception hierarchy for coolbound."""


class CoolboundError(ValueError):
    """Base class for all invalid-input errors raised by the package."""


class DimensionError(CoolboundError):
    """Vectors or spectra have incompatible dimensions."""


class InvalidExtensionError(CoolboundError):
    """A target gap exceeds the machine's largest gap, so no hot qubit can bridge it."""


class UnphysicalRegimeError(CoolboundError):
    """A closed-form result leaves its physical domain (e.g. negative temperature)."""


class BudgetError(CoolboundError):
    """Requested problem size exceeds what an exhaustive check can afford."""


class ConfigError(CoolboundError):
    """Malformed run configuration; carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
