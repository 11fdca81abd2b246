"""Exception types shared across the toolkit."""


class ScancellError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ScancellError, ValueError):
    """An input violates a documented precondition."""


class ParseError(ScancellError, ValueError):
    """Text does not match any accepted identifier grammar."""


class ConfigError(ScancellError, ValueError):
    """A configuration object or file fails validation."""


class AnalysisError(ScancellError, RuntimeError):
    """A raster lacks the signal an analysis step requires."""
