"""Exception types shared across the package."""


class DdsingError(Exception):
    """Base class for every error this package raises on purpose."""


class DimensionMismatch(DdsingError):
    """Input is not square, or the sizes of related objects disagree."""


class NonPositiveWeight(DdsingError):
    """A weight that must be strictly positive is zero or negative."""


class PreconditionViolated(DdsingError):
    """Operation called outside its contract (reducible block, strict row, ...)."""


class ResidualTooLarge(DdsingError):
    """A certificate failed its residual check; usually a tolerance mismatch."""


class ZeroDiagonal(DdsingError):
    """An operation that needs nonzero diagonal entries met a zero one."""


class SingularDependentBlock(DdsingError):
    """A dependent diagonal block is numerically singular; theory says it never is."""


class TooLarge(DdsingError):
    """Matrix exceeds the size cap of the brute-force oracle."""


class DegenerateSupport(DdsingError):
    """Random support never became strongly connected within the retry budget."""


class NotApplicable(DdsingError):
    """No verdict exists because the matrix is not diagonally dominant."""


class ParseError(DdsingError):
    """Malformed matrix input. Carries a 1-based row/column position when known."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        if row is not None:
            where = f"row {row}" + (f", column {col}" if col is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)
        self.row = row
        self.col = col
