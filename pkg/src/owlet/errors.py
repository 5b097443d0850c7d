"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when a requested configuration is unsupported or inconsistent."""


class DomainError(ValueError):
    """Raised when an input point lies outside the domain a model covers."""
