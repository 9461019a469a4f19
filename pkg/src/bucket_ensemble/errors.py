"""Error types shared across the package.

The CLI maps these onto process exit codes, so everything user-facing
should raise one of the two subclasses rather than a bare exception.
"""


class PipelineError(Exception):
    """Base class for errors with a defined exit code."""

    exit_code = 1


class DataError(PipelineError):
    """Malformed or inconsistent input data (exit code 2)."""

    exit_code = 2


class ConfigError(PipelineError):
    """Invalid configuration or parameter combination (exit code 3)."""

    exit_code = 3
