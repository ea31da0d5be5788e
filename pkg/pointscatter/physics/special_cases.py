"""Registry of the even and odd one-parameter interaction families.

Each family carries its closed bound-state and resonance equations, the
strength loci traced in the complex energy plane, and the expected critical,
supercritical and bound-state structure. The general solvers in
:mod:`spectra` and :mod:`resonance` are checked against these rows.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from ..errors import CaseHasNoBoundEquation, CaseHasNoResonances, UnknownCase
from .lambda_algebra import (
    Arrangement,
    LambdaParams,
    Parity,
    PhysicalStrengths,
    lambda_from_matrix,
    make_even_arrangement,
    make_odd_arrangement,
    strengths_to_lambda,
)

logger = logging.getLogger(__name__)


class CaseKind(str, Enum):
    EQUAL_MIXTURE = "equal-mixture"
    INVERTED_MIXTURE = "inverted-mixture"
    PSEUDOSCALAR = "pseudoscalar"
    MAGNETOSTATIC = "magnetostatic"
    SCALAR = "scalar"
    ELECTROSTATIC = "electrostatic"


@dataclass(frozen=True, slots=True)
class SpecialCaseId:
    """A one-parameter family with its free strength.

    ``strength`` is ``A0 = B`` for the equal mixture, ``g = b/2`` for the
    inverted mixture, and ``W``, ``A1``, ``B`` or ``A0`` for the pure kinds.
    """

    parity: Parity
    kind: CaseKind
    strength: float = 0.0

    def __post_init__(self) -> None:
        try:
            parity = Parity(self.parity)
            kind = CaseKind(self.kind)
        except ValueError as exc:
            raise UnknownCase(f"Unknown case {self.parity}/{self.kind}") from exc
        if parity is Parity.GENERAL:
            raise UnknownCase("Special cases are either even or odd")
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "strength", float(self.strength))

    @classmethod
    def parse(cls, text: str, strength: float = 0.0) -> "SpecialCaseId":
        """Parse a CLI identifier such as ``even/equal-mixture``."""
        parity, sep, kind = text.strip().lower().partition("/")
        if not sep:
            raise UnknownCase(f"Case '{text}' must look like 'even/scalar'")
        return cls(parity, kind.replace("_", "-"), strength)  # type: ignore[arg-type]

    @property
    def name(self) -> str:
        return f"{self.parity.value}/{self.kind.value}"

    def with_strength(self, strength: float) -> "SpecialCaseId":
        return replace(self, strength=strength)


def all_cases() -> list[SpecialCaseId]:
    return [SpecialCaseId(parity, kind) for parity in (Parity.EVEN, Parity.ODD) for kind in CaseKind]


# --- instantiation ----------------------------------------------------------


def case_strengths(case: SpecialCaseId) -> PhysicalStrengths:
    """Physical couplings at the left point."""
    g = case.strength
    if case.kind is CaseKind.EQUAL_MIXTURE:
        return PhysicalStrengths(B=g, A0=g)
    if case.kind is CaseKind.INVERTED_MIXTURE:
        # a = d = 1, c = 0, b = 2g maps back to B = g, A0 = -g
        return PhysicalStrengths(B=g, A0=-g)
    if case.kind is CaseKind.PSEUDOSCALAR:
        return PhysicalStrengths(W=g)
    if case.kind is CaseKind.MAGNETOSTATIC:
        return PhysicalStrengths(A1=g)
    if case.kind is CaseKind.SCALAR:
        return PhysicalStrengths(B=g)
    return PhysicalStrengths(A0=g)


def base_lambda(case: SpecialCaseId) -> LambdaParams:
    g = case.strength
    if case.kind is CaseKind.EQUAL_MIXTURE:
        return LambdaParams(0.0, 1.0, 0.0, 2.0 * g, 1.0)
    if case.kind is CaseKind.INVERTED_MIXTURE:
        return LambdaParams(0.0, 1.0, 2.0 * g, 0.0, 1.0)
    return strengths_to_lambda(case_strengths(case))


def instantiate(case: SpecialCaseId, m: float, l: float) -> Arrangement:
    """Build the even or odd arrangement of ``case`` at mass ``m`` and separation ``l``."""
    base = base_lambda(case)
    if case.parity is Parity.EVEN:
        return make_even_arrangement(base, m, l)
    return make_odd_arrangement(base, m, l)


# --- closed forms -----------------------------------------------------------
#
# Bound residuals are written in kappa = sqrt(m^2 - E^2); resonance residuals
# follow from kappa -> -ik, so exp(-kappa l) becomes eps = exp(ikl).

Residuals = tuple[np.ndarray, ...]


def _rho(w: float) -> float:
    return 4.0 * w / (4.0 + w * w)


def _bound_even_equal(E, g, m, l):
    kappa = np.sqrt(m * m - E * E)
    s, e = kappa / (m + E), np.exp(-kappa * l)
    return s + g * (1 + e), s + g * (1 - e)


def _bound_even_inverted(E, g, m, l):
    kappa = np.sqrt(m * m - E * E)
    s, e = kappa / (m + E), np.exp(-kappa * l)
    return 1 / s + g * (1 - e), 1 / s + g * (1 + e)


def _bound_pseudoscalar(E, g, m, l, parity):
    kappa = np.sqrt(m * m - E * E)
    rho = _rho(g)
    if parity is Parity.EVEN:
        growth = np.exp(kappa * l)
        return growth - rho, growth + rho
    return (np.exp(2 * kappa * l) + rho * rho,)


def _bound_even_scalar(E, g, m, l):
    kappa = np.sqrt(m * m - E * E)
    e = np.exp(-kappa * l)
    lead = (4 + g * g) * kappa
    return lead - 4 * g * (-m - E * e), lead - 4 * g * (-m + E * e)


def _bound_even_electrostatic(E, g, m, l):
    kappa = np.sqrt(m * m - E * E)
    e = np.exp(-kappa * l)
    lead = (g * g - 4) * kappa
    return lead - 4 * g * (E + m * e), lead - 4 * g * (E - m * e)


def _bound_odd_equal(E, g, m, l):
    kappa = np.sqrt(m * m - E * E)
    e2 = np.exp(-2 * kappa * l)
    return (g * g * (m + E) * (1 - e2) - (m - E),)


def _bound_odd_inverted(E, g, m, l):
    kappa = np.sqrt(m * m - E * E)
    e2 = np.exp(-2 * kappa * l)
    return (g * g * (m - E) * (1 - e2) - (m + E),)


def _bound_odd_scalar(E, g, m, l):
    kappa2 = m * m - E * E
    e2 = np.exp(-2 * np.sqrt(kappa2) * l)
    return ((4 * g) ** 2 * (m * m - E * E * e2) - (4 + g * g) ** 2 * kappa2,)


def _bound_odd_electrostatic(E, g, m, l):
    kappa2 = m * m - E * E
    e2 = np.exp(-2 * np.sqrt(kappa2) * l)
    return ((4 * g) ** 2 * (E * E - m * m * e2) - (4 - g * g) ** 2 * kappa2,)


def _k(E, m):
    E = np.asarray(E, dtype=complex)
    return E, np.sqrt(E - m) * np.sqrt(E + m)


def _res_even_equal(E, g, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    return 1j * k - g * (m + E) * (1 + eps), 1j * k - g * (m + E) * (1 - eps)


def _res_even_inverted(E, g, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    return (E + m) - 1j * g * k * (1 - eps), (E + m) - 1j * g * k * (1 + eps)


def _res_pseudoscalar(E, g, m, l, parity):
    E, k = _k(E, m)
    rho2 = _rho(g) ** 2
    wave = np.exp(-2j * k * l)
    return (wave - rho2,) if parity is Parity.EVEN else (wave + rho2,)


def _res_even_scalar(E, g, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    lead = (4 + g * g) * (-1j * k)
    return lead - 4 * g * (-m - E * eps), lead - 4 * g * (-m + E * eps)


def _res_even_electrostatic(E, g, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    lead = (g * g - 4) * (-1j * k)
    return lead - 4 * g * (E + m * eps), lead - 4 * g * (E - m * eps)


def _res_odd_equal(E, g, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return (g * g * (E + m) * (eps2 - 1) - (E - m),)


def _res_odd_inverted(E, g, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return (g * g * (E - m) * (eps2 - 1) - (E + m),)


def _res_odd_scalar(E, g, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return ((4 + g * g) ** 2 * k * k + (4 * g) ** 2 * (m * m - E * E * eps2),)


def _res_odd_electrostatic(E, g, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return ((4 - g * g) ** 2 * k * k + (4 * g) ** 2 * (E * E - m * m * eps2),)


# Loci: each function returns the strength combination that the resonance
# condition fixes at energy E. It is independent of the strength itself, so a
# pole of strength g sits where the locus takes the matching real value.


def _locus_even_equal(E, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    return 1j * k / ((m + E) * (1 + eps)), 1j * k / ((m + E) * (1 - eps))


def _locus_even_inverted(E, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    return (E + m) / (1j * k * (1 - eps)), (E + m) / (1j * k * (1 + eps))


def _locus_pseudoscalar(E, m, l):
    _, k = _k(E, m)
    return (np.exp(-2j * k * l),)


def _locus_even_scalar(E, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    return (-m - E * eps) / (-1j * k), (-m + E * eps) / (-1j * k)


def _locus_even_electrostatic(E, m, l):
    E, k = _k(E, m)
    eps = np.exp(1j * k * l)
    return (E + m * eps) / (-1j * k), (E - m * eps) / (-1j * k)


def _locus_odd_equal(E, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return ((E - m) / ((E + m) * (eps2 - 1)),)


def _locus_odd_inverted(E, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return ((E + m) / ((E - m) * (eps2 - 1)),)


def _locus_odd_scalar(E, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return ((E * E * eps2 - m * m) / (k * k),)


def _locus_odd_electrostatic(E, m, l):
    E, k = _k(E, m)
    eps2 = np.exp(2j * k * l)
    return ((m * m * eps2 - E * E) / (k * k),)


# --- expectations -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Symmetry:
    """Strength map leaving the spectrum invariant, optionally combined with ``E -> -E``."""

    name: str
    strength_map: Callable[[float], float]
    flips_energy: bool = False


@dataclass(slots=True)
class CaseExpectation:
    critical_values: list[float] = field(default_factory=list)
    supercritical_values: list[float] = field(default_factory=list)
    critical_for_all: bool = False
    supercritical_for_all: bool = False
    bound_count: Callable[[float], int] = lambda g: 0
    symmetries: list[Symmetry] = field(default_factory=list)
    has_resonances: bool = True
    note: str = ""


def _even_equal_count(g: float, ml: float) -> int:
    if g >= 0:
        return 0
    return 1 if g >= -1.0 / (2.0 * ml) else 2


def _scalar_pair(ml: float) -> list[float]:
    if ml < 1.0:
        return []
    root = math.sqrt(ml * ml - 1.0)
    return [-2.0 * (ml + root), -2.0 * (ml - root)]


def _even_scalar_count(b: float, ml: float) -> int:
    if b >= 0:
        return 0
    pair = _scalar_pair(ml)
    if pair and pair[0] < b < pair[1] and b != -2.0:
        return 4
    return 2


def _even_electrostatic_count(a0: float, ml: float) -> int:
    if a0 == 0:
        return 0
    ratio = (a0 * a0 - 4.0) / (4.0 * a0)
    return int(ratio > -ml) + int(ratio < ml)


def expectations(case: SpecialCaseId, m: float, l: float) -> CaseExpectation:
    """Critical and supercritical strengths, bound-state counts and symmetries of ``case``."""
    ml = m * l
    root = math.sqrt(ml * ml + 1.0)
    even = case.parity is Parity.EVEN
    kind = case.kind
    threshold = [0.0, -1.0 / (2.0 * ml)] if ml > 0 else [0.0]

    if kind is CaseKind.EQUAL_MIXTURE:
        if even:
            return CaseExpectation(
                critical_values=threshold,
                supercritical_for_all=True,
                bound_count=lambda g: _even_equal_count(g, ml),
                note="supercritical for every strength",
            )
        return CaseExpectation(
            critical_values=[0.0],
            supercritical_for_all=True,
            bound_count=lambda g: int(g != 0),
            symmetries=[Symmetry("A0 -> -A0", lambda g: -g)],
        )
    if kind is CaseKind.INVERTED_MIXTURE:
        if even:
            return CaseExpectation(
                critical_for_all=True,
                supercritical_values=threshold,
                bound_count=lambda g: _even_equal_count(g, ml),
                note="critical for every strength",
            )
        return CaseExpectation(
            critical_for_all=True,
            supercritical_values=[0.0],
            bound_count=lambda g: int(g != 0),
            symmetries=[Symmetry("g -> -g", lambda g: -g)],
        )
    if kind is CaseKind.PSEUDOSCALAR:
        return CaseExpectation(
            critical_for_all=True,
            supercritical_for_all=True,
            bound_count=lambda w: 0,
            symmetries=[Symmetry("W -> -W", lambda w: -w), Symmetry("W -> 4/W", lambda w: 4.0 / w)],
            note="resonances become real at |W| = 2",
        )
    if kind is CaseKind.MAGNETOSTATIC:
        return CaseExpectation(has_resonances=False, note="free-like: the interaction is a pure phase")
    if kind is CaseKind.SCALAR:
        if even:
            pair = _scalar_pair(ml)
            return CaseExpectation(
                critical_values=[0.0, *pair],
                supercritical_values=[0.0, *pair],
                bound_count=lambda b: _even_scalar_count(b, ml),
                symmetries=[Symmetry("B -> 4/B", lambda b: 4.0 / b)],
            )
        return CaseExpectation(
            critical_values=[0.0],
            supercritical_values=[0.0],
            bound_count=lambda b: int(b != 0 and abs(b) != 2.0) * 2,
            symmetries=[
                Symmetry("B -> -B", lambda b: -b),
                Symmetry("B -> 4/B", lambda b: 4.0 / b),
                Symmetry("E -> -E", lambda b: b, flips_energy=True),
            ],
        )
    if even:
        return CaseExpectation(
            critical_values=[0.0, 2.0 * ml - 2.0 * root, 2.0 * ml + 2.0 * root],
            supercritical_values=[0.0, -2.0 * ml - 2.0 * root, -2.0 * ml + 2.0 * root],
            bound_count=lambda a0: _even_electrostatic_count(a0, ml),
            symmetries=[Symmetry("A0 -> -4/A0", lambda a0: -4.0 / a0)],
        )
    return CaseExpectation(
        critical_values=[0.0],
        supercritical_values=[0.0],
        bound_count=lambda a0: 2 * int(a0 != 0),
        symmetries=[
            Symmetry("A0 -> -A0", lambda a0: -a0),
            Symmetry("A0 -> 4/A0", lambda a0: 4.0 / a0),
            Symmetry("E -> -E", lambda a0: a0, flips_energy=True),
        ],
        note="resonances never become real",
    )


# --- registry ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class _CaseRow:
    bound: Callable[..., Residuals] | None
    resonance: Callable[..., Residuals] | None
    locus: Callable[..., Residuals] | None


def _with_parity(func, parity):
    return lambda *args: func(*args, parity)


_REGISTRY: dict[tuple[Parity, CaseKind], _CaseRow] = {
    (Parity.EVEN, CaseKind.EQUAL_MIXTURE): _CaseRow(_bound_even_equal, _res_even_equal, _locus_even_equal),
    (Parity.EVEN, CaseKind.INVERTED_MIXTURE): _CaseRow(
        _bound_even_inverted, _res_even_inverted, _locus_even_inverted
    ),
    (Parity.EVEN, CaseKind.PSEUDOSCALAR): _CaseRow(
        _with_parity(_bound_pseudoscalar, Parity.EVEN),
        _with_parity(_res_pseudoscalar, Parity.EVEN),
        _locus_pseudoscalar,
    ),
    (Parity.EVEN, CaseKind.MAGNETOSTATIC): _CaseRow(None, None, None),
    (Parity.EVEN, CaseKind.SCALAR): _CaseRow(_bound_even_scalar, _res_even_scalar, _locus_even_scalar),
    (Parity.EVEN, CaseKind.ELECTROSTATIC): _CaseRow(
        _bound_even_electrostatic, _res_even_electrostatic, _locus_even_electrostatic
    ),
    (Parity.ODD, CaseKind.EQUAL_MIXTURE): _CaseRow(_bound_odd_equal, _res_odd_equal, _locus_odd_equal),
    (Parity.ODD, CaseKind.INVERTED_MIXTURE): _CaseRow(
        _bound_odd_inverted, _res_odd_inverted, _locus_odd_inverted
    ),
    (Parity.ODD, CaseKind.PSEUDOSCALAR): _CaseRow(
        _with_parity(_bound_pseudoscalar, Parity.ODD),
        _with_parity(_res_pseudoscalar, Parity.ODD),
        _locus_pseudoscalar,
    ),
    (Parity.ODD, CaseKind.MAGNETOSTATIC): _CaseRow(None, None, None),
    (Parity.ODD, CaseKind.SCALAR): _CaseRow(_bound_odd_scalar, _res_odd_scalar, _locus_odd_scalar),
    (Parity.ODD, CaseKind.ELECTROSTATIC): _CaseRow(
        _bound_odd_electrostatic, _res_odd_electrostatic, _locus_odd_electrostatic
    ),
}


def _row(case: SpecialCaseId) -> _CaseRow:
    try:
        return _REGISTRY[(case.parity, case.kind)]
    except KeyError as exc:
        raise UnknownCase(f"No registry entry for {case.name}") from exc


def bound_residual(case: SpecialCaseId, E, m: float, l: float) -> Residuals:
    """
    Closed bound-state residuals of ``case`` at real ``|E| < m``.

    Even families with a two-sign condition return the ``+`` and ``-``
    branches as a pair; the other families return a single residual.
    """
    row = _row(case)
    if row.bound is None:
        raise CaseHasNoBoundEquation(f"{case.name} has no bound-state equation")
    E = np.asarray(E, dtype=float)
    return tuple(np.asarray(r, dtype=float) for r in row.bound(E, case.strength, m, l))


def resonance_residual(case: SpecialCaseId, E, m: float, l: float) -> Residuals:
    """Closed resonance residuals (principal branch of ``k``)."""
    row = _row(case)
    if row.resonance is None:
        raise CaseHasNoResonances(f"{case.name} behaves as a free particle and has no resonances")
    return tuple(np.asarray(r, dtype=complex) for r in row.resonance(E, case.strength, m, l))


def locus_functions(case: SpecialCaseId) -> Callable[[np.ndarray, float, float], Residuals]:
    row = _row(case)
    if row.locus is None:
        raise CaseHasNoResonances(f"{case.name} has no resonance locus")
    return row.locus


def bound_roots(
    case: SpecialCaseId, m: float, l: float, *, grid: int = 4096, endpoint_eps: float = 1e-6
) -> list[float]:
    """Real zeros of every closed branch, refined with ``brentq``."""
    energies = np.linspace(-m + endpoint_eps * m, m - endpoint_eps * m, grid)
    branches = bound_residual(case, energies, m, l)
    roots: list[float] = []
    for index, values in enumerate(branches):
        def branch(E: float, index: int = index) -> float:
            return float(bound_residual(case, np.array([E]), m, l)[index][0])

        crossings = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
        roots.extend(brentq(branch, energies[i], energies[i + 1], xtol=1e-13 * m) for i in crossings)
    return sorted(float(r) for r in roots)


# --- limits -----------------------------------------------------------------


def single_point_bound_energies(matrix: np.ndarray, m: float) -> list[float]:
    """
    Bound energies of one interaction with matching matrix ``matrix``.

    For a single point the condition reduces to ``b s^2 + (a+d) s + c = 0`` with
    ``s = sqrt((m-E)/(m+E)) > 0``; each positive root gives
    ``E = m (1 - s^2)/(1 + s^2)``.
    """
    p = lambda_from_matrix(matrix)
    if abs(p.b) < 1e-14:
        roots = [] if abs(p.a + p.d) < 1e-14 else [-p.c / (p.a + p.d)]
    else:
        roots = [r.real for r in np.roots([p.b, p.a + p.d, p.c]) if abs(r.imag) < 1e-12]
    energies = [m * (1 - s * s) / (1 + s * s) for s in roots if s > 0]
    return sorted(energies)


def scalar_effective_strength(B: float) -> tuple[float, float]:
    """Effective single scalar strength of a collapsing even scalar pair.

    Returns ``(8B/(B^4+4), 8B/(4+B^2))``: the first as usually quoted, the
    second reproduces the collapsed matching matrix exactly.
    """
    return 8.0 * B / (B**4 + 4.0), 8.0 * B / (4.0 + B * B)


def electrostatic_effective_strength(A0: float) -> float:
    return 8.0 * A0 / (4.0 - A0 * A0)


def scalar_single_point_energies(B: float, m: float) -> list[float]:
    """Single scalar point: ``kappa = -4mB/(4+B^2)``, ``E = +-sqrt(m^2 - kappa^2)``."""
    kappa = -4.0 * m * B / (4.0 + B * B)
    if kappa <= 0:
        return []
    energy = math.sqrt(max(m * m - kappa * kappa, 0.0))
    return sorted({-energy, energy})


def electrostatic_single_point_energies(A0: float, m: float) -> list[float]:
    """Single electrostatic point: ``E/kappa = (A0^2-4)/(4A0)``."""
    if A0 == 0:
        return []
    ratio = (A0 * A0 - 4.0) / (4.0 * A0)
    return [ratio * m / math.sqrt(1.0 + ratio * ratio)]


def asymptotic_bound_energies(case: SpecialCaseId, m: float) -> list[float]:
    """Bound energies as ``l -> infinity`` (each well binding on its own), with multiplicity."""
    g, even, kind = case.strength, case.parity is Parity.EVEN, case.kind
    if kind in (CaseKind.PSEUDOSCALAR, CaseKind.MAGNETOSTATIC) or g == 0:
        return []
    if kind in (CaseKind.EQUAL_MIXTURE, CaseKind.INVERTED_MIXTURE):
        energy = (1 - g * g) / (1 + g * g) * m
        if kind is CaseKind.INVERTED_MIXTURE:
            energy = -energy
        if even:
            return [energy, energy] if g < 0 else []
        return [energy]
    if kind is CaseKind.SCALAR:
        kappa = 4.0 * abs(g) * m / (4.0 + g * g)
        energy = math.sqrt(max(m * m - kappa * kappa, 0.0))
        if even:
            return [-energy, -energy, energy, energy] if g < 0 else []
        return [-energy, energy]
    ratio = (g * g - 4.0) / (4.0 * g)
    energy = ratio * m / math.sqrt(1.0 + ratio * ratio)
    if even:
        return [energy, energy]
    return sorted([-abs(energy), abs(energy)])
