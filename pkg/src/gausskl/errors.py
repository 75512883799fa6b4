"""Exception types raised by gausskl.

Every exception carries a class name that doubles as the diagnostic label
printed by the CLI, so the names are part of the public contract.
"""


class GaussKlError(Exception):
    """Base class for all gausskl errors."""


class NotSquare(GaussKlError):
    """Raw matrix input is not a square 2-D array."""


class AsymmetryExceedsTolerance(GaussKlError):
    """Matrix asymmetry is too large to be treated as roundoff noise."""


class NotPositiveDefinite(GaussKlError):
    """Cholesky factorization failed: a pivot was not strictly positive."""


class DimensionMismatch(GaussKlError):
    """Operands have incompatible dimensions."""


class NonPositiveVariance(GaussKlError):
    """A variance entry is zero or negative."""


class MatrixParseError(GaussKlError):
    """A matrix file could not be parsed as numeric CSV rows."""


class BuildError(GaussKlError):
    """A density model could not be constructed from the given parameters."""


class SpreadTooLarge(BuildError):
    """Mixture spread drives a component scale factor to zero or below."""
