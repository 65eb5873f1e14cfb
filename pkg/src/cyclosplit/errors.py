"""Exception hierarchy.

Every precondition failure derives from :class:`PreconditionError` (the CLI
maps it to exit code 3); :class:`InternalFault` signals a broken invariant
(exit code 4).
"""


class CyclosplitError(Exception):
    pass


class PreconditionError(CyclosplitError, ValueError):
    pass


class InternalFault(CyclosplitError, RuntimeError):
    pass


class NotCoprime(PreconditionError):
    pass


class NotDivisible(PreconditionError):
    pass


class OutOfRange(PreconditionError):
    pass


class RingMismatch(PreconditionError):
    pass


class DivideByZero(PreconditionError, ZeroDivisionError):
    pass


class NoRoot(PreconditionError):
    pass


class PinMismatch(PreconditionError):
    pass


class ZeroFactor(PreconditionError):
    """A radical-word factor vanishes in the residue field."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"factor {index} vanishes at the prime")


class DividesPUV(PreconditionError):
    pass


class BadN(PreconditionError):
    pass


class BadM(PreconditionError):
    pass


class EmptyFamily(PreconditionError):
    pass


class WrongDivisor(PreconditionError):
    pass


class PolicyMisuse(PreconditionError):
    pass


class BadS(PreconditionError):
    pass


class ParseError(PreconditionError):
    def __init__(self, offset, expected, message=None):
        self.offset = offset
        self.expected = sorted(set(expected))
        super().__init__(
            message or f"parse error at byte {offset}: expected one of {', '.join(self.expected)}"
        )


class SemanticError(PreconditionError):
    def __init__(self, offset, message):
        self.offset = offset
        super().__init__(f"{message} (byte {offset})")
