"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A state left the admissible set (non-positive density or pressure)."""


class ConfigError(ValueError):
    """A run configuration is malformed or violates a constraint."""
