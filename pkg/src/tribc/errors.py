"""Exception hierarchy shared by every tribc module.

The split mirrors how callers (CLI, HTTP service) need to react:
structural problems with supplied data, numeric inputs outside a
function's domain, violated operation preconditions, and blown
enumeration caps map to distinct exit codes / HTTP statuses.
"""


class TribcError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(TribcError, ValueError):
    """Malformed or inconsistent structured input (axes, shapes, files)."""


class DomainError(TribcError, ValueError):
    """A numeric argument lies outside the function's domain."""


class PreconditionError(TribcError, ValueError):
    """A documented operation precondition does not hold; message names it."""


class EnumerationCapError(TribcError, RuntimeError):
    """A search or enumeration would exceed the configured size cap."""
