"""Exception types shared across the package."""


class CosparError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(CosparError):
    """Invalid configuration value or domain construction input."""


class NumericalError(CosparError):
    """Linear-algebra or optimizer failure (factorization, non-convergence)."""


class ProtocolError(CosparError):
    """Interaction-loop misuse: out-of-order calls or malformed feedback."""


class ObjectiveParseError(CosparError):
    """Objective CSV could not be parsed; carries the offending row number."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)
        self.row = row


class DegenerateObjectiveError(CosparError):
    """Objective table cannot be normalized (constant values)."""


class SnapshotError(CosparError):
    """Session or engine snapshot is malformed or of an unsupported version."""
