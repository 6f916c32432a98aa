"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A function argument violates its precondition."""


class ValidationError(ValueError):
    """Data fails a semantic check (bad weights, unnormalized pmf, ...)."""


class ParseError(ValueError):
    """A file could not be parsed; message carries the line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class AccessError(RuntimeError):
    """An observation mode forbids the requested field."""


class ResourceError(RuntimeError):
    """The request exceeds a configured resource cap."""
