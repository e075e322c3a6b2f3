"""Exception hierarchy.

Every error raised by the library derives from :class:`SubmeasureLabError`.
The CLI maps :class:`SizeGuard` to exit code 3 and :class:`InputError`
(plus its subclasses) to exit code 2.
"""


class SubmeasureLabError(Exception):
    pass


class InputError(SubmeasureLabError):
    """Malformed or inconsistent input."""


class GroundMismatch(InputError):
    pass


class EmptyGround(InputError):
    pass


class EmptyRestriction(InputError):
    pass


class MissingEntry(InputError):
    """A TABLE submeasure was asked for a subset it does not list."""


class SizeGuard(SubmeasureLabError):
    """An exhaustive operation was requested above its configured size limit."""


class LevelCapExceeded(SubmeasureLabError):
    """A Mazur chain did not reach the set within the configured level cap.

    This is not a proof that the value is infinite; raise the cap to certify.
    """

    def __init__(self, cap: int):
        super().__init__(f"set not reached within level cap {cap} (value >= {cap + 1})")
        self.cap = cap


class NonIntegerValue(SubmeasureLabError):
    pass


class NotAttained(SubmeasureLabError):
    pass


class InfiniteSingleton(SubmeasureLabError):
    """The hat LP is unbounded because some point has infinite submeasure."""


class CoverageGap(InputError):
    pass


class NotProbability(InputError):
    pass


class HypothesisFailure(SubmeasureLabError):
    pass


class BlockTooSmall(InputError):
    pass


class EntryAboveOne(InputError):
    pass


class NotHomogeneous(SubmeasureLabError):
    pass


class NotBarrierSet(InputError):
    pass


class Insufficient(SubmeasureLabError):
    """A finite input is too short to reach the requested target size."""


class SignedInput(InputError):
    pass


class ZeroScale(InputError):
    pass


class DeadlineExceeded(SubmeasureLabError):
    def __init__(self, message: str, progress: dict):
        super().__init__(message)
        self.progress = progress
