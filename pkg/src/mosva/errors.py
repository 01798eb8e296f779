"""Exceptions shared across the package."""


class WindowError(Exception):
    """A computation was asked for coefficients beyond its certified window.

    ``needed`` carries the cutoff or order that would suffice, when known.
    """

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class SchemaError(Exception):
    """A serialized document violates the instance schema.

    ``path`` locates the offending field, json-pointer style.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
