"""Exception hierarchy shared by all modules."""


class PolyautError(Exception):
    """Base class for every error raised by this package."""


class RingMismatch(PolyautError, ValueError):
    pass


class NegativeExponentError(PolyautError, ValueError):
    """A negative exponent where only nonnegative exponents make sense."""


class DomainError(PolyautError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NoRationalRoot(DomainError):
    pass


class WitnessMissing(DomainError):
    pass


class NotAutomorphism(DomainError):
    pass


class NegativeZPower(DomainError):
    pass


class DegreeMismatch(PolyautError, AssertionError):
    pass


class ParseError(PolyautError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
