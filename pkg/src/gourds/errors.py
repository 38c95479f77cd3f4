"""Exception types shared across the package."""


class GourdsError(Exception):
    """Base class for all domain errors."""


class BoardParseError(GourdsError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ImproperBoardError(GourdsError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"board is not proper: {report}")


class IllegalMoveError(GourdsError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        if index is not None:
            message = f"move {index}: {message}"
        super().__init__(message)


class StateSpaceLimitError(GourdsError):
    pass


class ColorMismatchError(GourdsError):
    pass


class PlacementError(GourdsError):
    pass


class GuardError(GourdsError):
    """An operation exceeded its desk-scale size guard."""
