"""
Exception hierarchy for flagpave.

Library code raises these; the command-line entry point maps them to exit
codes (see ``exit_code_for``).
"""


class FlagPaveError(Exception):
    """Base class for every error raised by flagpave."""

    exit_code: int = 1


class ConfigurationError(FlagPaveError):
    """An environment variable holds an unusable value."""


class InputFormatError(FlagPaveError):
    """A quiver, representation or module file could not be parsed."""


class DimensionMismatchError(FlagPaveError, ValueError):
    """Matrix or vector shapes are incompatible."""


class QuiverMismatchError(FlagPaveError, ValueError):
    """Two objects live over different quivers or fields."""


class DisconnectedQuiverError(FlagPaveError, ValueError):
    """Classification needs a connected quiver."""


class NotDynkinError(FlagPaveError, ValueError):
    """The operation is only defined for Dynkin quivers or shapes."""


class OutOfScopeError(FlagPaveError):
    """Input is valid but belongs to a case this tool does not handle (affine paving)."""


class InvalidRootError(FlagPaveError, ValueError):
    """A dimension vector is not a positive root of the quiver."""


class ProjectiveInputError(FlagPaveError, ValueError):
    """tau was asked for a projective indecomposable."""


class InjectiveInputError(FlagPaveError, ValueError):
    """tau inverse was asked for an injective indecomposable."""


class MalformedRepresentationError(FlagPaveError, ValueError):
    """A representation failed a structural check (for example a failed decomposition)."""


class RelationViolationError(FlagPaveError, ValueError):
    """A module over an extended quiver breaks a commutativity relation."""

    def __init__(self, message: str, violated: list[str] | None = None):
        super().__init__(message)
        self.violated = violated or []


class InvalidDepthError(FlagPaveError, ValueError):
    """Extended quivers need d >= 1, and d >= 2 when strict."""


class ExtensionCountError(FlagPaveError, ValueError):
    """X_S or S^X requested for a pair with [S,X]^1 != 1."""


class InjectiveSummandError(FlagPaveError, ValueError):
    """The map X -> tau S is not unique up to scalar because X has an injective summand."""


class PrimeUnsafeError(FlagPaveError, ValueError):
    """Reduction modulo p changed the structure (a denominator or a Hom dimension)."""


class InsufficientSamplesError(FlagPaveError, ValueError):
    """Too few counting records to interpolate a polynomial of the requested degree."""


class BudgetExceededError(FlagPaveError):
    """An enumeration visited more nodes than allowed."""

    exit_code = 4

    def __init__(self, limit: int):
        super().__init__(f"enumeration budget of {limit} nodes exceeded")
        self.limit = limit


class VerificationMismatchError(FlagPaveError):
    """A paving or count disagreed with the brute-force oracle."""

    exit_code = 2


class UnresolvedPavingError(FlagPaveError):
    """The paving engine could not resolve a piece."""

    exit_code = 3


class ProjectiveSummandError(FlagPaveError, ValueError):
    """The map tau^{-1} X -> S is not unique up to scalar because S has a projective summand."""


def exit_code_for(exc: BaseException) -> int:
    """Exit code for an exception reaching the command line."""
    if isinstance(exc, FlagPaveError):
        return exc.exit_code
    return 1
