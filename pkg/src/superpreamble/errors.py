"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when a requested computation exceeds a configured size cap."""
