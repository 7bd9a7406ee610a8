"""Exception hierarchy shared by every module of the package."""


class PcrpError(Exception):
    """Base class for all errors raised by :mod:`pcrp`."""


class CycleDetected(PcrpError):
    pass


class ContractEndpoint(PcrpError):
    pass


class NotReachable(PcrpError):
    pass


class PathBudgetExceeded(PcrpError):
    pass


class ParseError(PcrpError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PcrpError):
    pass


class NotCoverable(PcrpError):
    pass


class Infeasible(PcrpError):
    pass


class MalformedPath(PcrpError):
    pass


class Disconnected(PcrpError):
    pass


class DisconnectedOutput(PcrpError):
    pass


class ImproperColoring(PcrpError):
    pass


class InvalidCover(PcrpError):
    pass


class NotAClique(PcrpError):
    pass


class NotEnoughPairs(PcrpError):
    pass


class SizeLimitExceeded(PcrpError):
    pass
