"""Exception types shared across the package."""


class SpanlabError(Exception):
    """Base class for all errors raised by spanlab."""


class AxiomViolation(SpanlabError):
    """A group table (or action table) fails one of the axioms."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BoundExceeded(SpanlabError):
    pass


class ForeignSubgroup(SpanlabError):
    pass


class TargetMismatch(SpanlabError):
    pass


class ObjectMismatch(SpanlabError):
    pass


class GroupMismatch(SpanlabError):
    pass


class BaseMismatch(SpanlabError):
    pass


class NotEquivariant(SpanlabError):
    pass


class NotInvertible(SpanlabError):
    pass


class NotDivisible(SpanlabError):
    pass


class UnsupportedLevel(SpanlabError):
    pass


class VeryAdditivityViolation(SpanlabError):
    def __init__(self, message, qset=None):
        super().__init__(message)
        self.qset = qset


class ParseError(SpanlabError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.message = message
        self.line = line
        self.column = column


class UnknownName(SpanlabError):
    pass
