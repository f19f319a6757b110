"""Exception types shared across the package."""


class MalformedInputError(ValueError):
    """Serialized or encoded data that cannot be decoded."""


class UnsupportedPatternError(ValueError):
    """Pattern outside the shape an index supports (e.g. shorter than one
    minimizer window); callers may fall back to a plain character-level search."""
