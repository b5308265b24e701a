"""Exception hierarchy shared by every module."""


class SkewCError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(SkewCError, ValueError):
    pass


class NotSquare(SkewCError, ValueError):
    pass


class NotSymmetric(SkewCError, ValueError):
    pass


class NotUnitary(SkewCError, ValueError):
    pass


class NotSkew(SkewCError, ValueError):
    pass


class NumericalFailure(SkewCError, ArithmeticError):
    pass


class MissingArgument(SkewCError, ValueError):
    pass


class InvalidVariant(SkewCError, ValueError):
    pass


class InvalidK(SkewCError, ValueError):
    pass


class IndexOutOfRange(SkewCError, IndexError):
    pass


class DegenerateInput(SkewCError, ValueError):
    pass


class ParseError(SkewCError, ValueError):
    """Malformed or non-finite content in a matrix/conjugation document."""
