"""Plane-wave, transfer and connection matrices for two point interactions."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import InvalidInput, SingularMatrix
from ..parallel import partitioned_map
from .lambda_algebra import Arrangement, LambdaParams, Parity

logger = logging.getLogger(__name__)


class MatrixKind(str, Enum):
    SCATTERING = "scattering"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


class ParityClass(str, Enum):
    EVEN = "even"
    ODD = "odd"
    SINGULAR_GAUGE = "singular_gauge"
    UNDEFINED = "undefined"


def momentum(E: complex, m: float) -> complex:
    """Principal-branch momentum ``k = sqrt(E - m) * sqrt(E + m)``."""
    E = complex(E)
    return cmath.sqrt(E - m) * cmath.sqrt(E + m)


def momentum_array(energies: np.ndarray, m: float) -> np.ndarray:
    energies = np.asarray(energies, dtype=complex)
    return np.sqrt(energies - m) * np.sqrt(energies + m)


@dataclass(frozen=True, slots=True)
class ComplexEnergy:
    value: complex
    mass: float

    @property
    def k(self) -> complex:
        return momentum(self.value, self.mass)


def _energy(E: complex | ComplexEnergy) -> complex:
    return complex(E.value) if isinstance(E, ComplexEnergy) else complex(E)


@dataclass(frozen=True, slots=True)
class TransferMatrix2:
    matrix: np.ndarray
    kind: MatrixKind = MatrixKind.SCATTERING
    arrangement: Arrangement | None = None
    energy: complex | None = None

    @property
    def m11(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def m12(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def m21(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def m22(self) -> complex:
        return complex(self.matrix[1, 1])

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))


def _guard_k(k: complex, m: float, tol: Tolerances) -> None:
    if abs(k) < tol.k_guard * m:
        raise SingularMatrix(f"k = {k!r} is at the threshold; use the critical/supercritical forms")


def plane_wave_matrix(
    k: complex, E: complex, x: float, m: float, *, tol: Tolerances | None = None
) -> np.ndarray:
    """Rows ``(e^{ikx}, e^{-ikx})`` and ``(k/(E+m) e^{ikx}, -k/(E+m) e^{-ikx})``."""
    tol = tol or DEFAULT_TOLERANCES
    _guard_k(k, m, tol)
    q = k / (complex(E) + m)
    forward, backward = cmath.exp(1j * k * x), cmath.exp(-1j * k * x)
    return np.array([[forward, backward], [q * forward, -q * backward]], dtype=complex)


def critical_plane_wave_matrix(x: float, m: float) -> np.ndarray:
    return np.array([[2j * m * x, 1.0], [1.0, 0.0]], dtype=complex)


def supercritical_plane_wave_matrix(x: float, m: float) -> np.ndarray:
    return np.array([[1.0, 0.0], [-2j * m * x, 1.0]], dtype=complex)


def _single_point(lam: LambdaParams, basis: np.ndarray) -> np.ndarray:
    return np.linalg.solve(basis, lam.matrix() @ basis)


def transfer_matrix_at(
    lambda1: LambdaParams,
    lambda2: LambdaParams,
    x1: float,
    x2: float,
    E: complex,
    m: float,
    *,
    tol: Tolerances | None = None,
) -> np.ndarray:
    """Transfer matrix for interactions at arbitrary positions ``x1 < x2``."""
    tol = tol or DEFAULT_TOLERANCES
    E = complex(E)
    k = momentum(E, m)
    first = _single_point(lambda1, plane_wave_matrix(k, E, x1, m, tol=tol))
    second = _single_point(lambda2, plane_wave_matrix(k, E, x2, m, tol=tol))
    return second @ first


def transfer_matrix(
    arr: Arrangement, E: complex | ComplexEnergy, *, tol: Tolerances | None = None
) -> TransferMatrix2:
    """
    Transfer matrix ``M`` connecting far-left to far-right plane-wave amplitudes.

    Raises
    ------
    SingularMatrix
        At the thresholds ``E = +-m``.
    """

    value = _energy(E)
    x1, x2 = arr.positions
    matrix = transfer_matrix_at(arr.lambda1, arr.lambda2, x1, x2, value, arr.mass, tol=tol)
    return TransferMatrix2(matrix, MatrixKind.SCATTERING, arr, value)


def connection_matrix(
    arr: Arrangement, E: complex | ComplexEnergy, *, tol: Tolerances | None = None
) -> np.ndarray:
    """``Gamma = Lambda2 P(k, x2) P^-1(k, x1) Lambda1``."""
    tol = tol or DEFAULT_TOLERANCES
    value = _energy(E)
    k = momentum(value, arr.mass)
    x1, x2 = arr.positions
    p1 = plane_wave_matrix(k, value, x1, arr.mass, tol=tol)
    p2 = plane_wave_matrix(k, value, x2, arr.mass, tol=tol)
    return arr.lambda2.matrix() @ p2 @ np.linalg.inv(p1) @ arr.lambda1.matrix()


def critical_transfer(arr: Arrangement) -> TransferMatrix2:
    x1, x2 = arr.positions
    first = _single_point(arr.lambda1, critical_plane_wave_matrix(x1, arr.mass))
    second = _single_point(arr.lambda2, critical_plane_wave_matrix(x2, arr.mass))
    return TransferMatrix2(second @ first, MatrixKind.CRITICAL, arr, complex(arr.mass))


def supercritical_transfer(arr: Arrangement) -> TransferMatrix2:
    x1, x2 = arr.positions
    first = _single_point(arr.lambda1, supercritical_plane_wave_matrix(x1, arr.mass))
    second = _single_point(arr.lambda2, supercritical_plane_wave_matrix(x2, arr.mass))
    return TransferMatrix2(second @ first, MatrixKind.SUPERCRITICAL, arr, complex(-arr.mass))


def _close(x: float, y: float, scale: float = 1.0) -> bool:
    return abs(x - y) <= 1e-12 * max(1.0, scale)


def classify_odd_limit(p: LambdaParams) -> ParityClass:
    """Parity of the single interaction an odd pair collapses to as ``l -> 0``."""
    scale = abs(p.a) + abs(p.d)
    if _close(p.a, p.d, scale):
        return ParityClass.SINGULAR_GAUGE
    if _close(p.b, 0.0) and _close(p.c, 0.0):
        return ParityClass.ODD
    if _close(p.a, -p.d, scale) and (_close(p.phi, 0.0) or _close(p.phi, math.pi / 2)):
        return ParityClass.EVEN
    return ParityClass.UNDEFINED


def single_point_limit(arr: Arrangement) -> tuple[np.ndarray, ParityClass]:
    """
    Matching matrix of the single interaction obtained as ``l -> 0+``.

    Even pairs collapse to ``[[1+2bc, 2ibd], [-2iac, 1+2bc]]``; odd pairs to
    ``exp(2i phi) [[a^2-bc, ib(a-d)], [ic(a-d), d^2-bc]]``. A singular-gauge
    outcome (``a = d``) is the odd case reduced to a pure phase.
    """
    p = arr.lambda1
    a, b, c, d = p.a, p.b, p.c, p.d
    if arr.parity is Parity.EVEN:
        matrix = np.array([[1 + 2 * b * c, 2j * b * d], [-2j * a * c, 1 + 2 * b * c]], dtype=complex)
        return matrix, ParityClass.EVEN
    if arr.parity is Parity.ODD:
        phase = cmath.exp(2j * p.phi)
        matrix = phase * np.array(
            [[a * a - b * c, 1j * b * (a - d)], [1j * c * (a - d), d * d - b * c]], dtype=complex
        )
        return matrix, classify_odd_limit(p)
    raise InvalidInput("single_point_limit needs an even or odd arrangement")


# --- vectorised evaluation --------------------------------------------------
#
# With P(x) = P0 diag(e^{ikx}, e^{-ikx}) the single-point factor is
# exp(i phi) D(x)^-1 N D(x), where N = P0^-1 [[a, ib], [-ic, d]] P0 depends on
# the energy only through q = k/(E+m).


def _n_entries(p: LambdaParams, q: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    ibq = 1j * p.b * q
    icq = 1j * p.c / q
    n11 = 0.5 * (p.a + p.d + ibq - icq)
    n12 = 0.5 * (p.a - p.d - ibq - icq)
    n21 = 0.5 * (p.a - p.d + ibq + icq)
    n22 = 0.5 * (p.a + p.d - ibq + icq)
    return n11, n12, n21, n22


def _momenta(
    arr: Arrangement, energies: np.ndarray, tol: Tolerances, guard: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    k = momentum_array(energies, arr.mass)
    if not guard:
        with np.errstate(divide="ignore", invalid="ignore"):
            return k, k / (energies + arr.mass)
    if np.any(np.abs(k) < tol.k_guard * arr.mass):
        raise SingularMatrix("Energy grid touches a threshold E = +-m")
    return k, k / (energies + arr.mass)


def _m22_parts(
    arr: Arrangement, energies: np.ndarray, tol: Tolerances, guard: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    energies = np.asarray(energies, dtype=complex)
    k, q = _momenta(arr, energies, tol, guard)
    with np.errstate(divide="ignore", invalid="ignore"):
        _, first12, _, first22 = _n_entries(arr.lambda1, q)
        _, _, second21, second22 = _n_entries(arr.lambda2, q)
    phase = cmath.exp(1j * arr.total_phase)
    crossing = second21 * first12 * np.exp(2j * k * arr.separation)
    direct = second22 * first22
    return phase * (crossing + direct), np.abs(crossing) + np.abs(direct)


def m22_values(
    arr: Arrangement,
    energies: np.ndarray,
    *,
    tol: Tolerances | None = None,
    threads: int | None = None,
) -> np.ndarray:
    """``M22`` on an array of (complex) energies, evaluated elementwise."""
    tol = tol or DEFAULT_TOLERANCES
    values = np.asarray(energies, dtype=complex)
    return partitioned_map(lambda chunk: _m22_parts(arr, chunk, tol)[0], values, threads=threads)


def m22_with_scale(
    arr: Arrangement, energies: np.ndarray, *, tol: Tolerances | None = None, guard: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """``M22`` plus the magnitude of its two contributing terms, for relative acceptance tests.

    With ``guard=False`` threshold energies give non-finite values instead of raising.
    """
    return _m22_parts(arr, energies, tol or DEFAULT_TOLERANCES, guard)


def transfer_entries(
    arr: Arrangement, energies: np.ndarray, *, tol: Tolerances | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All four entries of ``M`` on an energy array."""
    tol = tol or DEFAULT_TOLERANCES
    energies = np.asarray(energies, dtype=complex)
    k, q = _momenta(arr, energies, tol)
    a11, a12, a21, a22 = _n_entries(arr.lambda1, q)
    b11, b12, b21, b22 = _n_entries(arr.lambda2, q)
    ahead = np.exp(1j * k * arr.separation)
    behind = np.exp(-1j * k * arr.separation)
    phase = cmath.exp(1j * arr.total_phase)
    m11 = b11 * a11 + b12 * a21 * np.exp(-2j * k * arr.separation)
    m12 = b11 * a12 * ahead + b12 * a22 * behind
    m21 = b21 * a11 * ahead + b22 * a21 * behind
    m22 = b21 * a12 * np.exp(2j * k * arr.separation) + b22 * a22
    return phase * m11, phase * m12, phase * m21, phase * m22


@dataclass(slots=True)
class ScatteringAmplitudes:
    energy: np.ndarray
    r: np.ndarray
    t: np.ndarray

    @property
    def reflectance(self) -> np.ndarray:
        return np.abs(self.r) ** 2

    @property
    def transmittance(self) -> np.ndarray:
        return np.abs(self.t) ** 2

    @property
    def unitarity_defect(self) -> np.ndarray:
        return np.abs(self.reflectance + self.transmittance - 1.0)


def scattering_amplitudes(
    arr: Arrangement, energies: np.ndarray | float, *, tol: Tolerances | None = None
) -> ScatteringAmplitudes:
    """``r = -M21/M22`` and ``t = det(M)/M22`` for real energies with ``|E| > m``."""
    values = np.atleast_1d(np.asarray(energies, dtype=float))
    if np.any(np.abs(values) <= arr.mass):
        raise InvalidInput("Scattering energies need |E| > m")
    m11, m12, m21, m22 = transfer_entries(arr, values, tol=tol)
    det = m11 * m22 - m12 * m21
    return ScatteringAmplitudes(energy=values, r=-m21 / m22, t=det / m22)


def s_matrix(arr: Arrangement, E: float, *, tol: Tolerances | None = None) -> np.ndarray:
    """``S = (1/M22) [[-M21, 1], [det M, M12]]``."""
    tm = transfer_matrix(arr, E, tol=tol)
    return np.array([[-tm.m21, 1.0], [tm.det, tm.m12]], dtype=complex) / tm.m22
