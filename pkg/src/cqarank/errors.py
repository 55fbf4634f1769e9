"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid or inconsistent input data (corpus, resources, predictions)."""


class ConfigError(ValueError):
    """Invalid configuration, missing resources, or malformed tool files."""
