"""Error hierarchy shared across the pipeline.

Every error the CLI can surface maps to a stable exit code so shell callers
can branch on failure class.
"""


class SyndarinError(Exception):
    exit_code = 1


class ConfigInvalidError(SyndarinError):
    exit_code = 2


class MissingUpstreamError(SyndarinError):
    exit_code = 3


class StaleUpstreamError(SyndarinError):
    exit_code = 4


class DataError(SyndarinError):
    """Invalid or degenerate data handed to a pipeline operation."""

    exit_code = 5


class ProviderError(SyndarinError):
    """Failure surfaced by an external service client."""

    exit_code = 6
