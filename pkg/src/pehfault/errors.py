"""Error categories shared across the package.

ConfigError covers bad run parameters and malformed configuration files;
DataError covers problems with manifest/recording contents. The CLI maps
them to distinct exit codes.
"""


class ConfigError(Exception):
    """Invalid run configuration or configuration file."""


class DataError(Exception):
    """Invalid or unreadable input data (manifest rows, recording files)."""
