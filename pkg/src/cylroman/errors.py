"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """Raised when an instance is too large for the requested computation."""

    def __init__(self, message, required_bytes=None):
        super().__init__(message)
        self.required_bytes = required_bytes


class FormatError(ValueError):
    """Malformed matrix file. ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
