"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A configuration is inconsistent or violates a grid/capacity constraint."""


class NumericalAccuracyError(RuntimeError):
    """A strict-mode numerical self-check exceeded its tolerance."""
