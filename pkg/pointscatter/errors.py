"""Exception hierarchy for the point-interaction toolkit."""

from __future__ import annotations


class PointScatterError(Exception):
    """Base class for every error raised by :mod:`pointscatter`."""


class ValidationError(PointScatterError, ValueError):
    """Invalid physics or configuration input (CLI exit code 2)."""


class NumericalError(PointScatterError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy answer (CLI exit code 3)."""


class InvalidInput(ValidationError):
    pass


class ImpermeableInteraction(ValidationError):
    """The interaction decouples the two sides of its support point."""


class DegenerateDenominator(ValidationError):
    """``2 cos(phi) + a + d`` vanishes, so the strengths are infinite."""


class SingularMatrix(ValidationError):
    """The plane-wave matrix is not invertible (k = 0, E = +-m)."""


class UnknownCase(ValidationError):
    pass


class CaseHasNoBoundEquation(ValidationError):
    pass


class CaseHasNoResonances(ValidationError):
    pass


class UnknownBoundary(ValidationError):
    pass


class InvalidStrength(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class UnknownFigure(ValidationError):
    pass


class GridTooCoarse(NumericalError):
    """Closed-form branches resolved more roots than the general scan."""


class NoConvergence(NumericalError):
    pass


class ClosedFormMismatch(NumericalError):
    """General transfer-matrix detector and closed form disagree."""


__all__ = [
    "PointScatterError",
    "ValidationError",
    "NumericalError",
    "InvalidInput",
    "ImpermeableInteraction",
    "DegenerateDenominator",
    "SingularMatrix",
    "UnknownCase",
    "CaseHasNoBoundEquation",
    "CaseHasNoResonances",
    "UnknownBoundary",
    "InvalidStrength",
    "ConfigError",
    "UnknownFigure",
    "GridTooCoarse",
    "NoConvergence",
    "ClosedFormMismatch",
]
