"""Exception hierarchy shared by every stage of the pipeline."""


class TbwzError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(TbwzError, ValueError):
    """The caller handed in data that violates a documented precondition."""


class CorruptInputError(TbwzError, ValueError):
    """Encoded data (a BWT, a payload, an aux vector) cannot be decoded."""


class CorruptFileError(CorruptInputError):
    """A container file is malformed.  ``offset`` is the byte position at fault."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class CorruptStructureError(CorruptInputError):
    """A tunneled BWT's bitvectors are inconsistent with its L column."""


class InvalidBlockSetError(TbwzError, ValueError):
    """A block set contains a critical collision and cannot be tunneled."""


class InvariantViolation(TbwzError, AssertionError):
    """An internal invariant that should be unbreakable was broken."""


class EstimatorDomainError(TbwzError, ValueError):
    """An estimator was evaluated outside the domain where it is defined."""
