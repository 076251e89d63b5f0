"""Exception hierarchy.

Every domain error derives from :class:`PolarError` (itself a ``ValueError``)
so callers and the CLI can catch one type.
"""


class PolarError(ValueError):
    pass


class BoundsViolation(PolarError):
    pass


class RateTooHigh(PolarError):
    pass


class Infeasible(PolarError):
    pass


class LengthMismatch(PolarError):
    pass


class KTooLarge(PolarError):
    pass


class PatternInvalid(PolarError):
    pass


class NotAPermutation(PolarError):
    pass


class WrongLength(PolarError):
    pass


class BadN(PolarError):
    pass


class NotPowerOfTwo(PolarError):
    pass


class TooLarge(PolarError):
    pass


class AllocationIncomplete(PolarError):
    pass


class ModeMismatch(PolarError):
    pass


class ConflictingRepeats(PolarError):
    pass
