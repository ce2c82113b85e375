"""Exception taxonomy shared by the library and the CLI.

Each category maps to a distinct process exit code so scripted callers can
tell input mistakes from scale caps from genuine invariant violations.
"""

from __future__ import annotations


class RmlistError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(RmlistError):
    """Malformed or out-of-contract input (bad parameters, mismatched n, ...)."""

    exit_code = 2


class ScaleError(RmlistError):
    """Requested computation exceeds a documented feasibility cap."""

    exit_code = 3


class ApproximationFailure(RmlistError):
    """Sampling retries exhausted without reaching the target distance."""

    exit_code = 4

    def __init__(self, message: str, best_distance=None, retries_used: int = 0):
        super().__init__(message)
        self.best_distance = best_distance
        self.retries_used = retries_used


class InvariantFailure(RmlistError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 5


class WeightTooLargeError(InputError):
    """Function weight violates the low-weight precondition wt < 2^-k (1 - eps)."""


class ZeroBiasError(InputError):
    """Balanced function: the single-derivative identity is undefined."""


class RadiusError(InputError):
    """Decoding radius is not below half the minimum distance."""


class DegenerateBiasError(InvariantFailure):
    """A prefix derivative had zero bias despite the low-weight precondition."""
