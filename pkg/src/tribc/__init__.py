"""Three-user broadcast-channel toolkit."""

__version__ = "0.1.0"
