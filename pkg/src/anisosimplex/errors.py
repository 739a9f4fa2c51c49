"""Exception types raised across the package."""


class AnisoSimplexError(Exception):
    """Base class for all package errors."""


class DegenerateSimplexError(AnisoSimplexError):
    pass


class InvalidDimensionError(AnisoSimplexError):
    pass


class NotPositiveDefiniteError(AnisoSimplexError):
    pass


class InsufficientSmoothnessError(AnisoSimplexError):
    pass


class UnsupportedDegreeError(AnisoSimplexError):
    pass


class InvalidFamilyParamsError(AnisoSimplexError):
    pass


class MeshParseError(AnisoSimplexError):
    """Malformed mesh text; carries the 1-based line (and column when known)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
