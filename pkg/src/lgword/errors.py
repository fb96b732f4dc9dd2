class KTermError(ValueError):
    """Base class for every error raised by the package."""


class TermSyntaxError(KTermError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ExponentOverflow(KTermError):
    pass


class PreconditionError(KTermError):
    pass


class MatchFailure(KTermError):
    pass


class InternalError(RuntimeError):
    """A guard tripped inside an algorithm; indicates a bug, not bad input."""
