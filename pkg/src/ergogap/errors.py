"""Exception hierarchy.

Every error carries a short machine-readable ``code`` (the class name) and
an ``exit_status`` used by the command-line interface.
"""


class ErgoError(Exception):
    exit_status = 4

    @property
    def code(self) -> str:
        return type(self).__name__


class ValidationError(ErgoError, ValueError):
    """Bad input: shapes, normalization, parameters, file contents."""

    exit_status = 2


class NumericalFailure(ErgoError, ArithmeticError):
    """An internal consistency check failed beyond tolerance."""

    exit_status = 4


class MismatchFound(ErgoError):
    """A regenerated table disagrees with its embedded expectations."""

    exit_status = 3

    def __init__(self, message, diffs=()):
        super().__init__(message)
        self.diffs = list(diffs)


# linalg
class NonHermitian(ValidationError):
    pass


class NonSquare(ValidationError):
    pass


class EmptySubset(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


# model
class NotNormalized(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class TooManyDegenerateGrounds(ValidationError):
    pass


class DecreasingLadder(ValidationError):
    pass


class BadProbabilities(ValidationError):
    pass


# states
class UnknownFamily(ValidationError):
    pass


class BadParameterCount(ValidationError):
    pass


# partitions
class TooFewParties(ValidationError):
    pass


class BadK(ValidationError):
    pass


class NoRefinableBlock(ValidationError):
    pass


class BadPartition(ValidationError):
    pass


# ergotropy
class LengthMismatch(ValidationError):
    pass


class NotAProbabilityVector(ValidationError):
    pass


class EmptyBlock(ValidationError):
    pass


# measures
class EmptyGaps(ValidationError):
    pass


class WrongArity(ValidationError):
    pass


class WrongPartyCount(ValidationError):
    pass


class OutOfRange(ValidationError):
    pass


# roof
class RankTooLarge(ValidationError):
    pass


class BadSelector(ValidationError):
    pass
