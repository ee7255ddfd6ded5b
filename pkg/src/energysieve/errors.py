"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured memory or work cap."""


class InvariantViolationError(AssertionError):
    """Two computation paths that must agree exactly did not."""


class SetFileError(ValueError):
    """A set file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
