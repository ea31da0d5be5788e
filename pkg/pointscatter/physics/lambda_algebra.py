"""Point-interaction data, strength/Lambda conversions and parity arrangements."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import DegenerateDenominator, ImpermeableInteraction, InvalidInput

logger = logging.getLogger(__name__)


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    GENERAL = "general"


def _check_number(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value):
        raise InvalidInput(f"{name} must not be NaN")
    return value


@dataclass(frozen=True, slots=True)
class PhysicalStrengths:
    """Scalar ``B``, electrostatic ``A0``, magnetostatic ``A1`` and pseudoscalar ``W`` couplings.

    An infinite coupling is written as ``math.inf`` (or ``-math.inf``); only
    :func:`is_permeable` and the impermeable-box workflows accept those.
    """

    B: float = 0.0
    A0: float = 0.0
    A1: float = 0.0
    W: float = 0.0

    def __post_init__(self) -> None:
        for name in ("B", "A0", "A1", "W"):
            object.__setattr__(self, name, _check_number(name, getattr(self, name)))

    @property
    def has_infinite(self) -> bool:
        return any(math.isinf(v) for v in self.as_tuple())

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.B, self.A0, self.A1, self.W)


@dataclass(frozen=True, slots=True)
class LambdaParams:
    """Matching data ``Lambda = exp(i phi) [[a, i b], [-i c, d]]`` at one support point."""

    phi: float
    a: float
    b: float
    c: float
    d: float
    permeable: bool = True

    def __post_init__(self) -> None:
        for name in ("phi", "a", "b", "c", "d"):
            object.__setattr__(self, name, _check_number(name, getattr(self, name)))
        if not 0.0 <= self.phi < math.pi:
            raise InvalidInput(f"phi must lie in [0, pi), got {self.phi}")
        entries = (self.a, self.b, self.c, self.d)
        if not self.permeable:
            if not any(math.isinf(v) for v in entries):
                raise InvalidInput("An impermeable Lambda needs at least one infinite entry")
            return
        if any(math.isinf(v) for v in entries):
            raise InvalidInput("A permeable Lambda must have finite entries")
        ad, bc = self.a * self.d, self.b * self.c
        scale = max(1.0, abs(ad), abs(bc))
        if abs(ad - bc - 1.0) > DEFAULT_TOLERANCES.algebraic * scale:
            raise InvalidInput(f"Lambda needs a*d - b*c = 1, got {ad - bc!r}")

    @classmethod
    def identity(cls) -> "LambdaParams":
        return cls(phi=0.0, a=1.0, b=0.0, c=0.0, d=1.0)

    def matrix(self) -> np.ndarray:
        if not self.permeable:
            raise ImpermeableInteraction("No matrix arithmetic on an impermeable Lambda")
        phase = cmath.exp(1j * self.phi)
        return phase * np.array([[self.a, 1j * self.b], [-1j * self.c, self.d]], dtype=complex)

    def with_phase(self, phi: float) -> "LambdaParams":
        """Same SL(2,R) part with a new phase, folded into [0, pi)."""
        folded = phi % (2 * math.pi)
        sign = 1.0
        if folded >= math.pi:
            folded -= math.pi
            sign = -1.0
        if folded >= math.pi:
            folded = 0.0
        return LambdaParams(folded, sign * self.a, sign * self.b, sign * self.c, sign * self.d)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.phi, self.a, self.b, self.c, self.d)


def lambda_from_matrix(matrix: np.ndarray, *, tol: Tolerances | None = None) -> LambdaParams:
    """Recover ``(phi, a, b, c, d)`` from a matrix in U(1) x SL(2,R) form."""
    tol = tol or DEFAULT_TOLERANCES
    matrix = np.asarray(matrix, dtype=complex)
    det = np.linalg.det(matrix)
    if abs(det) == 0:
        raise InvalidInput("Matching matrix is singular")
    phi = (cmath.phase(det) / 2.0) % math.pi
    if phi >= math.pi:
        phi = 0.0
    core = cmath.exp(-1j * phi) * matrix
    a, d = core[0, 0].real, core[1, 1].real
    b, c = core[0, 1].imag, -core[1, 0].imag
    leak = max(abs(core[0, 0].imag), abs(core[1, 1].imag), abs(core[0, 1].real), abs(core[1, 0].real))
    if leak > 1e3 * tol.algebraic * max(1.0, float(np.abs(core).max())):
        raise InvalidInput("Matrix is not of the form exp(i phi) [[a, i b], [-i c, d]]")
    return LambdaParams(phi, a, b, c, d)


def is_permeable(s: PhysicalStrengths) -> bool:
    """
    Finite-strength permeability test ``A1 != 0 or B^2 + W^2 - A0^2 - 4 != 0``.

    Infinite strengths always return ``False``: the test is only equivalent to
    permeability for finite couplings, and no classification is attempted
    beyond that.
    """
    if s.has_infinite:
        return False
    return s.A1 != 0.0 or (s.B**2 + s.W**2 - s.A0**2 - 4.0) != 0.0


def strengths_to_lambda(s: PhysicalStrengths) -> LambdaParams:
    """
    Map physical strengths to Lambda-matrix parameters.

    Parameters
    ----------
    s:
        Finite couplings at one support point.

    Returns
    -------
    LambdaParams
        ``phi`` is the angle of ``(B^2+W^2-4-A0^2+A1^2, 4 A1)`` folded into
        ``[0, pi)``; the sign ``eta`` is chosen so that the folded phase and
        the real part reproduce the same matrix.

    Raises
    ------
    InvalidInput
        On infinite strengths.
    ImpermeableInteraction
        When ``A1 = 0`` and ``B^2 + W^2 - A0^2 - 4 = 0``.
    """

    if s.has_infinite:
        raise InvalidInput("Infinite strengths have no finite Lambda representation")
    B, A0, A1, W = s.as_tuple()
    reduced = B**2 + W**2 - 4.0 - A0**2
    x = reduced + A1**2
    y = 4.0 * A1
    norm = math.hypot(x, y)
    if A1 == 0.0 and reduced == 0.0:
        raise ImpermeableInteraction(f"Strengths {s.as_tuple()} describe an impermeable point")
    if norm == 0.0:
        raise ImpermeableInteraction(f"Strengths {s.as_tuple()} describe an impermeable point")

    eta = math.copysign(1.0, A1) if A1 != 0.0 else math.copysign(1.0, reduced)
    theta = math.atan2(y, x)
    phi = theta if eta > 0 else theta + math.pi
    phi %= 2 * math.pi
    if phi >= math.pi:
        # only reachable through rounding next to the fold
        phi -= math.pi
        eta = -eta
    if phi >= math.pi:
        phi = 0.0

    a = eta * (A0**2 - A1**2 - B**2 - (W - 2.0) ** 2) / norm
    b = eta * 4.0 * (A0 - B) / norm
    c = eta * (-4.0 * (A0 + B)) / norm
    d = eta * (A0**2 - A1**2 - B**2 - (W + 2.0) ** 2) / norm
    return LambdaParams(phi, a, b, c, d)


def lambda_to_strengths(p: LambdaParams, *, tol: Tolerances | None = None) -> PhysicalStrengths:
    """Inverse map ``B = 2(c+b)/D``, ``A0 = 2(c-b)/D``, ``A1 = -4 sin(phi)/D``, ``W = 2(d-a)/D``."""
    tol = tol or DEFAULT_TOLERANCES
    if not p.permeable:
        raise ImpermeableInteraction("An impermeable Lambda has no finite strengths")
    denominator = 2.0 * math.cos(p.phi) + p.d + p.a
    if abs(denominator) <= tol.algebraic * max(1.0, abs(p.a) + abs(p.d)):
        raise DegenerateDenominator(
            f"2cos(phi) + d + a vanishes for {p.as_tuple()}; the strengths are infinite"
        )
    return PhysicalStrengths(
        B=2.0 * (p.c + p.b) / denominator,
        A0=2.0 * (p.c - p.b) / denominator,
        A1=-4.0 * math.sin(p.phi) / denominator,
        W=2.0 * (p.d - p.a) / denominator,
    )


def even_partner(p: LambdaParams) -> LambdaParams:
    """Lambda at the mirror point of an even pair: ``exp(-i phi) [[d, i b], [-i c, a]]``."""
    if p.phi == 0.0:
        return LambdaParams(0.0, p.d, p.b, p.c, p.a)
    # -phi folds to pi - phi, which flips the overall sign
    return LambdaParams(math.pi - p.phi, -p.d, -p.b, -p.c, -p.a)


def odd_partner(p: LambdaParams) -> LambdaParams:
    """Lambda at the mirror point of an odd pair: ``exp(i phi) [[a, -i b], [i c, d]]``."""
    return LambdaParams(p.phi, p.a, -p.b, -p.c, p.d)


@dataclass(frozen=True, slots=True)
class Arrangement:
    """Two point interactions at ``x1 = -l/2`` and ``x2 = +l/2``."""

    mass: float
    separation: float
    lambda1: LambdaParams
    lambda2: LambdaParams
    parity: Parity = Parity.GENERAL

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise InvalidInput(f"mass must be positive, got {self.mass}")
        if not self.separation >= 0:
            raise InvalidInput(f"separation must be non-negative, got {self.separation}")
        if not (self.lambda1.permeable and self.lambda2.permeable):
            raise ImpermeableInteraction("Arrangements need two permeable interactions")
        object.__setattr__(self, "parity", Parity(self.parity))
        if self.parity is Parity.EVEN:
            expected = even_partner(self.lambda1)
        elif self.parity is Parity.ODD:
            expected = odd_partner(self.lambda1)
        else:
            return
        scale = max(1.0, float(np.abs(expected.matrix()).max()))
        if not np.allclose(self.lambda2.matrix(), expected.matrix(), rtol=0, atol=1e-10 * scale):
            raise InvalidInput(f"lambda2 does not follow the {self.parity.value} pattern")

    @property
    def positions(self) -> tuple[float, float]:
        return (-self.separation / 2.0, self.separation / 2.0)

    @property
    def total_phase(self) -> float:
        return self.lambda1.phi + self.lambda2.phi

    def with_phase_shift(self, delta: float) -> "Arrangement":
        """Shift phi at point 1 (and point 2 per the parity pattern)."""
        first = self.lambda1.with_phase(self.lambda1.phi + delta)
        if self.parity is Parity.EVEN:
            return make_even_arrangement(first, self.mass, self.separation)
        if self.parity is Parity.ODD:
            return make_odd_arrangement(first, self.mass, self.separation)
        second = self.lambda2.with_phase(self.lambda2.phi + delta)
        return Arrangement(self.mass, self.separation, first, second)


def make_arrangement(lambda1: LambdaParams, lambda2: LambdaParams, m: float, l: float) -> Arrangement:
    return Arrangement(mass=m, separation=l, lambda1=lambda1, lambda2=lambda2, parity=Parity.GENERAL)


def make_even_arrangement(base: LambdaParams, m: float, l: float) -> Arrangement:
    if not base.permeable:
        raise ImpermeableInteraction("Even arrangements need a permeable base interaction")
    return Arrangement(mass=m, separation=l, lambda1=base, lambda2=even_partner(base), parity=Parity.EVEN)


def make_odd_arrangement(base: LambdaParams, m: float, l: float) -> Arrangement:
    if not base.permeable:
        raise ImpermeableInteraction("Odd arrangements need a permeable base interaction")
    return Arrangement(mass=m, separation=l, lambda1=base, lambda2=odd_partner(base), parity=Parity.ODD)
