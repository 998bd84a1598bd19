"""Exception taxonomy shared by all modules.

Exit-code mapping used by the CLI: input/domain/precondition problems are
"user errors" (exit 2), numeric search or internal consistency failures are
"solver errors" (exit 3).
"""


class SpectralBallError(Exception):
    """Base class for all library errors."""


class InvalidInputError(SpectralBallError):
    """Malformed input: wrong shape, non-finite entries, bad arguments."""


class DomainError(SpectralBallError):
    """Input lies outside the mathematical domain of the operation."""


class NotInHullError(DomainError):
    """Matrix is not a member of the convex hull of the spectral ball."""


class PreconditionError(SpectralBallError):
    """A documented precondition of the operation does not hold."""


class NoSolutionError(PreconditionError):
    """A linear problem admits no solution within tolerance."""


class UnsupportedError(SpectralBallError):
    """Valid input outside the supported envelope of the implementation."""


class NumericError(SpectralBallError):
    """A numeric search or solve failed (bracket loss, non-convergence)."""


class InternalError(SpectralBallError):
    """Cross-checked quantities disagree; indicates a solver bug."""
