"""Exception types shared across the package."""

from __future__ import annotations


class LieforgeError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(LieforgeError):
    """Operands live in spaces of different (or incompatible) dimensions."""


class SingularMatrixError(LieforgeError):
    """A matrix required to be invertible is singular."""


class NotAnIdealError(LieforgeError):
    """A subspace passed where an ideal is required fails the ideal test."""


class NotInVarietyError(LieforgeError):
    """The bracket does not lie in the requested variety.

    Carries a witness tuple of basis indices where the defining
    identity fails, when one is available.
    """

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class InvalidAlgebraError(LieforgeError):
    """A structure-constant table violates the Jacobi identity."""

    def __init__(self, message: str, triple: tuple[int, int, int] | None = None):
        super().__init__(message)
        self.triple = triple


class HypothesisFailedError(LieforgeError):
    """A deformation construction's hypotheses do not hold.

    ``clause`` names the first failing requirement.
    """

    def __init__(self, message: str, clause: str):
        super().__init__(message)
        self.clause = clause


class InvalidDeformationError(LieforgeError):
    """The direction is not a Lie bracket or not a 2-cocycle for the base."""


class ScenarioRejectedError(LieforgeError):
    """The requested scenario input is an excluded case (by design)."""


class SearchExhaustedError(LieforgeError):
    """A deterministic candidate search ran out of candidates.

    The message carries diagnostics describing the search space that
    was covered, so the search order can be widened deliberately.
    """


class ResourceCapError(LieforgeError):
    """The computation would exceed the configured coordinate cap.

    The cap guards exact elimination on large cochain spaces; it can be
    raised via the LIEFORGE_CAP environment variable.
    """


class ParseError(LieforgeError):
    """Malformed input text; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
