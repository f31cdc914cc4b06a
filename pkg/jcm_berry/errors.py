"""
Exception hierarchy.

Every error carries the process exit code the CLI reports for it:
2 for rejected input, 3 for numerical failures.
"""

from __future__ import annotations


class JcmBerryError(Exception):
    """Base class for all package errors."""

    exit_code: int = 3


class InvalidParameterError(JcmBerryError, ValueError):
    """A parameter or index is outside its accepted range."""

    exit_code = 2


class DegenerateSpectrumError(InvalidParameterError):
    """The mixing angle is undefined (lambda = Delta = 0, or complex degeneracy)."""


class OutputError(JcmBerryError):
    """Writing a result file failed."""


class NumericalError(JcmBerryError):
    """A numerical procedure could not deliver a trustworthy result."""


class StabilityError(NumericalError):
    """Fixed-step integration requested with too few steps."""

    def __init__(self, message: str, min_steps: int) -> None:
        super().__init__(message)
        self.min_steps = min_steps


class AdiabaticityError(NumericalError):
    """The evolved state did not return to the initial dressed state."""

    def __init__(self, message: str, overlap: float) -> None:
        super().__init__(message)
        self.overlap = overlap


class TrackingError(NumericalError):
    """An eigenvector path could not be followed around the loop."""

    def __init__(self, message: str, overlap: float, mesh: int) -> None:
        super().__init__(message)
        self.overlap = overlap
        self.mesh = mesh


class TruncationError(NumericalError):
    """Population reached the photon cutoff."""
