"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain input to a construction or operation."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class WrongOperationError(TypeError):
    """An operation was applied to a machine outside its supported class."""


class ExitsCoding(RuntimeError):
    """A lifted big-game strategy left the coding at a forced position."""

    def __init__(self, position, expected, got):
        super().__init__(
            f"big strategy wrote {got!r} at position {position}, "
            f"coding requires {expected}")
        self.position = position
        self.expected = expected
        self.got = got


class SessionError(RuntimeError):
    """A scripted strategy violated the turn protocol."""
