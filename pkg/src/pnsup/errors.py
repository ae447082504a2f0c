"""Exception hierarchy shared by the library and the command line."""


class PnsupError(Exception):
    """Base class for every error raised by pnsup."""


class NetSyntaxError(PnsupError):
    """Malformed net description or guard file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LimitExceeded(PnsupError):
    """An exploration or enumeration limit was hit."""


class StateLimitExceeded(LimitExceeded):
    pass


class BoundExceeded(LimitExceeded):
    pass


class ClosureTooLarge(LimitExceeded):
    pass


class CoverSearchTooLarge(LimitExceeded):
    pass


class NoSupervisorExists(PnsupError):
    """The initial marking itself is forbidden."""


class InfeasibleCover(PnsupError):
    """A column of a cover chart is hit by no row."""
