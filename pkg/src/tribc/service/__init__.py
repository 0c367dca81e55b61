"""FastAPI service wrapping the core package; the CLI shares the handlers."""
