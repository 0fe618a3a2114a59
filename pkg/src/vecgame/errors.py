"""Shared exception types."""


class DimensionError(ValueError):
    """Matrix/vector shapes or lengths do not line up."""


class ConfigError(ValueError):
    """A run configuration is malformed; message lists the offending fields."""
