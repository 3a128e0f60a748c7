"""Exceptions raised while loading or validating input data."""


class ParseError(ValueError):
    """Input text is not well-formed (bad JSON, wrong shape)."""


class ValidationError(ValueError):
    """Input parsed but violates an invariant (cycle, duplicate, unknown reference)."""
