"""Exception types shared across the package."""


class TwoAssocError(Exception):
    pass


class ValidationError(TwoAssocError):
    """A structural axiom failed.

    ``code`` names the violated condition and ``witness`` is the smallest
    offending piece of data we could point at.
    """

    def __init__(self, code, message, witness=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.witness = witness


class ParseError(TwoAssocError):
    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col


class BoundExceeded(TwoAssocError):
    pass


class FactorMismatch(TwoAssocError):
    """A checked decomposition failed to verify; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
