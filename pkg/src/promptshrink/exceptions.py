class ConfigurationError(ValueError):
    """Raised for out-of-range or inconsistent configuration values."""


class EmptyInputError(ValueError):
    """Raised when an operation needs non-empty text, chunks or documents."""


class ProviderError(RuntimeError):
    """An embedding or LLM provider failed to produce a result."""


class ProviderTimeout(ProviderError):
    """A provider call exceeded its deadline."""
