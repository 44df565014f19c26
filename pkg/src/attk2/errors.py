"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid input: malformed files, bad build parameters, schema violations."""


class NotFoundError(LookupError):
    """A requested element, ordinal, or value does not exist."""


class CorruptFileError(Exception):
    """A serialized store failed structural validation."""
