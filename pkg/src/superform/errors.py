"""Exception hierarchy shared by all modules."""


class SuperformError(Exception):
    """Base class for all library errors."""


class EmptyCell(SuperformError):
    """The given half-spaces have empty intersection."""


class UnboundedCell(SuperformError):
    """Operation requires a bounded cell (no recession rays)."""


class NotADecomposition(SuperformError):
    """Two cells intersect in a set that is not a common face.

    Carries the offending pair of cells in ``args[1]`` when available.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class AmbientMismatch(SuperformError):
    """Operands live in different ambient spaces."""


class BidegreeMismatch(SuperformError):
    """Form bidegree is incompatible with the requested operation."""


class UnsupportedBidegree(SuperformError):
    """Positivity test requested outside the decidable bidegrees."""


class NotPure(SuperformError):
    """Complex is not pure of the expected dimension."""


class NotCodimOne(SuperformError):
    """Cell is not a codimension-one face of any maximal cell."""


class IncompatibleDecompositions(SuperformError):
    """Image cells do not match the target decomposition."""


class NotSymmetric(SuperformError):
    """A symmetric (p,p)-form was required."""


class ArityMismatch(SuperformError):
    """Wrong number of arguments (e.g. mixed operator needs n inputs)."""


class NonPositiveEpsilon(SuperformError):
    """Smoothing parameter must be strictly positive."""


class ParseError(SuperformError):
    """Scene file could not be parsed; message carries the position."""


class ValidationError(SuperformError):
    """Scene content violates a library invariant; message names it."""


class UnknownCommand(SuperformError):
    """CLI command is not one of the supported verbs."""
