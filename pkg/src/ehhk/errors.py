"""Exception types shared across the package."""


class CatalogError(Exception):
    """Malformed catalog file (carries the offending line number)."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class InvariantError(CatalogError):
    """A space violates one of its structural invariants (names the field)."""

    def __init__(self, space_id, field, message):
        super().__init__(f"{space_id}: invariant violation in '{field}': {message}")
        self.space_id = space_id
        self.field = field


class OutOfRangeError(ValueError):
    """Family parameters outside the tabulated range."""


class UnsupportedSpaceError(ValueError):
    """Operation not defined for this space (e.g. non-proportional Killing ratios)."""


class NonEinsteinInputError(ValueError):
    """A quantity only defined at Einstein metrics was requested elsewhere."""
