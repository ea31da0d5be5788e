"""Resonance poles, imaginary-part loci and the impermeable-box limit."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from ..config import DEFAULT_TOLERANCES, SeedSpec, Tolerances
from ..errors import NoConvergence, UnknownBoundary, UnknownCase
from ..parallel import partitioned_map
from .lambda_algebra import Arrangement, Parity
from .locus import ComplexRegion, chain_segments, zero_level_segments
from .special_cases import CaseKind, SpecialCaseId, locus_functions, resonance_residual
from .transfer_core import m22_with_scale

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ResonancePole:
    """A pole ``E = E_R - i gamma/2`` in the lower half-plane; its conjugate is implied."""

    E_R: float
    gamma: float
    residual: float
    seed: complex
    iterations: int
    below_threshold: bool = False

    @property
    def energy(self) -> complex:
        return complex(self.E_R, -self.gamma / 2.0)


@dataclass(slots=True)
class ResonanceSearch:
    poles: list[ResonancePole] = field(default_factory=list)
    seeds: int = 0
    dropped: int = 0
    excluded_bound: int = 0


def default_region(m: float, seeds: SeedSpec) -> ComplexRegion:
    return ComplexRegion(seeds.re_min * m, seeds.re_max * m, seeds.im_min * m, seeds.im_max * m)


def _seed_grid(region: ComplexRegion, seeds: SeedSpec) -> np.ndarray:
    xs = np.linspace(region.re_min, region.re_max, seeds.nx)
    ys = np.linspace(region.im_min, region.im_max, seeds.ny)
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def _deflated(arr: Arrangement, z: np.ndarray, known: np.ndarray, tol: Tolerances) -> np.ndarray:
    values, _ = m22_with_scale(arr, z, tol=tol, guard=False)
    for root in known:
        values = values / (z - root)
    return values


def _newton(
    arr: Arrangement, seeds: np.ndarray, known: np.ndarray, spec: SeedSpec, tol: Tolerances
) -> np.ndarray:
    """Damped Newton from every seed; returns ``(z, iterations)`` stacked as complex columns."""
    m = arr.mass
    h = 1e-7 * m
    z = seeds.astype(complex).copy()
    iterations = np.zeros(z.shape, dtype=float)
    active = np.ones(z.shape, dtype=bool)

    with np.errstate(all="ignore"):
        for _ in range(spec.max_iter):
            if not active.any():
                break
            za = z[active]
            f = _deflated(arr, za, known, tol)
            slope = (_deflated(arr, za + h, known, tol) - _deflated(arr, za - h, known, tol)) / (2 * h)
            step = f / slope
            damping = np.ones(za.shape)
            trial = za - step
            for _ in range(12):
                worse = ~(np.abs(_deflated(arr, trial, known, tol)) < np.abs(f))
                worse &= np.isfinite(step)
                if not worse.any():
                    break
                damping[worse] *= 0.5
                trial = za - damping * step
            moved = np.abs(trial - za)
            idx = np.flatnonzero(active)
            z[idx] = trial
            iterations[idx] += 1
            finished = ~np.isfinite(trial) | (moved <= 1e-14 * np.maximum(m, np.abs(trial)))
            active[idx[finished]] = False
    return np.column_stack([z, iterations.astype(complex)])


def _polish(arr: Arrangement, z: complex, tol: Tolerances, steps: int = 8) -> complex:
    h = 1e-7 * arr.mass
    with np.errstate(all="ignore"):
        for _ in range(steps):
            point = np.array([z, z + h, z - h])
            values, _ = m22_with_scale(arr, point, tol=tol, guard=False)
            slope = (values[1] - values[2]) / (2 * h)
            if not np.isfinite(slope) or slope == 0:
                break
            step = values[0] / slope
            z = z - step
            if abs(step) <= 1e-15 * max(arr.mass, abs(z)):
                break
    return z


def accept_pole(arr: Arrangement, z: complex, tol: Tolerances | None = None) -> float:
    """Return ``|M22(z)|`` for a Newton end point, raising ``NoConvergence`` when it is not a root."""
    tol = tol or DEFAULT_TOLERANCES
    if not np.isfinite(z):
        raise NoConvergence("Newton iteration diverged")
    value, scale = m22_with_scale(arr, np.array([z]), tol=tol, guard=False)
    residual = abs(value[0])
    if not np.isfinite(residual) or residual > tol.pole * max(1.0, float(scale[0])):
        raise NoConvergence(f"Newton stopped at E={z.real:.6g}{z.imag:+.6g}j with |M22|={residual:.3e}")
    return residual


def search_resonances(
    arr: Arrangement,
    region: ComplexRegion | None = None,
    seeds: SeedSpec | None = None,
    *,
    tol: Tolerances | None = None,
) -> ResonanceSearch:
    """
    Locate zeros of ``M22`` in the lower half-plane.

    A first Newton pass runs on ``M22`` itself; each deflation round reruns
    every seed on ``M22`` divided by the roots found so far and polishes new
    roots on the undeflated function. Seeds that do not converge are counted
    and dropped.
    """

    seeds = seeds or SeedSpec()
    tol = tol or DEFAULT_TOLERANCES
    m = arr.mass
    region = region or default_region(m, seeds)
    start = _seed_grid(region, seeds)
    spacing = tol.dedupe * m

    found: list[tuple[complex, float, complex, int]] = []
    dropped = 0
    for round_index in range(seeds.deflation_rounds + 1):
        known = np.array([item[0] for item in found], dtype=complex)
        result = partitioned_map(
            lambda chunk: _newton(arr, chunk, known, seeds, tol), start, threads=seeds.threads
        )
        new_in_round = 0
        for seed, (z, iterations) in zip(start, result):
            if round_index > 0:
                z = _polish(arr, z, tol)
            try:
                residual = accept_pole(arr, z, tol)
            except NoConvergence as exc:
                if round_index == 0:
                    dropped += 1
                    logger.debug("Seed %s dropped: %s", seed, exc)
                continue
            if any(abs(z - other[0]) <= spacing for other in found):
                continue
            found.append((complex(z), residual, complex(seed), int(iterations.real)))
            new_in_round += 1
        logger.debug("Deflation round %d: %d new roots", round_index, new_in_round)
        if round_index > 0 and new_in_round == 0:
            break

    poles: list[ResonancePole] = []
    excluded = 0
    for z, residual, seed, iterations in found:
        in_window = region.re_min - spacing <= z.real <= region.re_max + spacing
        if z.imag > spacing or z.imag < region.im_min - spacing or not in_window:
            continue
        if abs(z.imag) <= spacing and abs(z.real) < m:
            excluded += 1
            continue
        below = z.real < -m
        if below:
            logger.warning("Pole at E=%.6g%+.6gj lies below -m on the principal branch", z.real, z.imag)
        poles.append(ResonancePole(z.real, max(-2.0 * z.imag, 0.0), residual, seed, iterations, below))

    poles.sort(key=lambda p: (p.E_R, p.gamma))
    if dropped:
        logger.warning("%d of %d Newton seeds did not converge and were dropped", dropped, start.size)
    logger.info("Located %d resonance poles", len(poles))
    return ResonanceSearch(poles=poles, seeds=int(start.size), dropped=dropped, excluded_bound=excluded)


def find_resonances(
    arr: Arrangement,
    region: ComplexRegion | None = None,
    seeds: SeedSpec | None = None,
    *,
    tol: Tolerances | None = None,
) -> list[ResonancePole]:
    return search_resonances(arr, region, seeds, tol=tol).poles


def closed_form_distance(case: SpecialCaseId, energy: complex, m: float, l: float) -> float:
    """Newton distance ``|r/r'|`` from ``energy`` to the nearest zero of the closed residual."""
    h = 1e-7 * m
    best = math.inf
    points = np.array([energy, energy + h, energy - h])
    for branch in resonance_residual(case, points, m, l):
        slope = (branch[1] - branch[2]) / (2 * h)
        if slope == 0:
            continue
        best = min(best, abs(branch[0] / slope))
    return best


# --- imaginary-part loci ----------------------------------------------------


@dataclass(frozen=True, slots=True)
class LocusCurve:
    points: np.ndarray
    case_tag: str
    branch: str


def _branch_labels(count: int) -> list[str]:
    return ["+", "-"] if count == 2 else ["0"]


@lru_cache(maxsize=64)
def _loci(
    parity: Parity, kind: CaseKind, region: ComplexRegion, nx: int, ny: int, m: float, l: float, curve_tol: float
) -> tuple[LocusCurve, ...]:
    case = SpecialCaseId(parity, kind)
    func = locus_functions(case)
    first = func(np.array([complex(region.re_min, region.im_min)]), m, l)
    curves: list[LocusCurve] = []
    for index, label in enumerate(_branch_labels(len(first))):
        def imag_part(z: np.ndarray, index: int = index) -> np.ndarray:
            with np.errstate(all="ignore"):
                return np.imag(func(np.asarray(z, dtype=complex), m, l)[index])

        kept = []
        for segment in zero_level_segments(imag_part, region, nx, ny):
            ends = np.array([segment[2], segment[3]])
            with np.errstate(all="ignore"):
                values = func(ends, m, l)[index]
            if np.all(np.abs(values.imag) <= curve_tol * np.maximum(1.0, np.abs(values))):
                kept.append(segment)
        for polyline in chain_segments(kept):
            curves.append(LocusCurve(polyline, case.name, label))
    return tuple(curves)


def trace_imaginary_locus(
    case: SpecialCaseId,
    region: ComplexRegion,
    grid: tuple[int, int] = (200, 120),
    m: float = 2.0,
    l: float = 1.0,
    *,
    tol: Tolerances | None = None,
) -> list[LocusCurve]:
    """
    Curves in the complex energy plane where the strength fixed by the case's
    resonance condition is real.

    The loci do not depend on the strength, so results are cached per case,
    region and grid. Crossings through poles of the strength function are
    dropped. An even ``ny`` keeps grid rows off the real axis for regions
    symmetric about it.
    """

    tol = tol or DEFAULT_TOLERANCES
    nx, ny = grid
    return list(_loci(case.parity, case.kind, region, int(nx), int(ny), float(m), float(l), tol.locus))


# --- impermeable walls ------------------------------------------------------
#
# Spinors are written as (u, w) with lower component v = i w. Inside the box
# the real propagator over a length x is
#     [[C, -(E+m) S], [(E-m) S, C]],  C = cos(kx), S = sin(kx)/k,
# continued to cosh/sinh below threshold.


@dataclass(frozen=True, slots=True)
class Wall:
    """One impermeable point: rows annihilating the spinor on its left and right side."""

    name: str
    left_row: tuple[float, float]
    right_row: tuple[float, float]


WALLS = {
    "pseudoscalar:-": Wall("pseudoscalar W=-2", (1.0, 0.0), (0.0, 1.0)),
    "pseudoscalar:+": Wall("pseudoscalar W=+2", (0.0, 1.0), (1.0, 0.0)),
    "scalar:+": Wall("scalar B=+2", (1.0, -1.0), (1.0, 1.0)),
    "scalar:-": Wall("scalar B=-2", (1.0, 1.0), (1.0, -1.0)),
    "equal-mixture": Wall("equal mixture |A0| -> inf", (1.0, 0.0), (1.0, 0.0)),
    "inverted-mixture": Wall("inverted mixture |g| -> inf", (0.0, 1.0), (0.0, 1.0)),
}


@dataclass(frozen=True, slots=True)
class BoxBoundary:
    name: str
    left: Wall
    right: Wall


@dataclass(frozen=True, slots=True)
class BoxState:
    energy: float
    region: str
    side: str = ""


@dataclass(slots=True)
class BoxSpectrum:
    boundary: BoxBoundary
    states: list[BoxState] = field(default_factory=list)

    @property
    def inside(self) -> list[float]:
        return [s.energy for s in self.states if s.region == "inside"]

    @property
    def outside(self) -> list[float]:
        return [s.energy for s in self.states if s.region == "outside"]

    @property
    def energies(self) -> list[float]:
        return sorted(s.energy for s in self.states)


def box_boundary_for(case: SpecialCaseId | str, sign: int = 1) -> BoxBoundary:
    """
    Impermeable limit of a registry family.

    ``sign`` picks ``W -> 2 sign`` or ``B -> 2 sign`` at the left point; the
    right point follows the even or odd pattern.
    """
    if isinstance(case, str):
        case = SpecialCaseId.parse(case)
    plus, minus = ("+", "-") if sign > 0 else ("-", "+")
    kind, even = case.kind, case.parity is Parity.EVEN
    if kind is CaseKind.PSEUDOSCALAR:
        left, right = f"pseudoscalar:{plus}", f"pseudoscalar:{minus if even else plus}"
    elif kind is CaseKind.SCALAR:
        left, right = f"scalar:{plus}", f"scalar:{plus if even else minus}"
    elif kind in (CaseKind.EQUAL_MIXTURE, CaseKind.INVERTED_MIXTURE):
        left = right = kind.value
    else:
        raise UnknownBoundary(f"{case.name} has no impermeable limit")
    name = f"{case.name}:{'+' if sign > 0 else '-'}"
    return BoxBoundary(name, WALLS[left], WALLS[right])


def parse_boundary(text: str) -> BoxBoundary:
    """``even/pseudoscalar:+`` style identifiers."""
    case_text, _, sign = text.partition(":")
    if sign not in ("", "+", "-"):
        raise UnknownBoundary(f"Unknown boundary sign in '{text}'")
    try:
        case = SpecialCaseId.parse(case_text)
    except UnknownCase as exc:
        raise UnknownBoundary(f"Unknown boundary '{text}'") from exc
    return box_boundary_for(case, -1 if sign == "-" else 1)


def _interior(E: np.ndarray, m: float, width: float) -> tuple[np.ndarray, np.ndarray]:
    k2 = E * E - m * m
    k = np.sqrt(np.abs(k2))
    with np.errstate(all="ignore"):
        above = k2 > 0
        below = k2 < 0
        c = np.where(above, np.cos(k * width), np.where(below, np.cosh(k * width), 1.0))
        s = np.where(
            above, np.sin(k * width) / k, np.where(below, np.sinh(k * width) / k, width)
        )
    return c, s


def _box_condition(boundary: BoxBoundary, E: np.ndarray, m: float, width: float) -> np.ndarray:
    r0, r1 = boundary.left.right_row
    start = (-r1, r0)
    c, s = _interior(E, m, width)
    u = c * start[0] - (E + m) * s * start[1]
    w = (E - m) * s * start[0] + c * start[1]
    q0, q1 = boundary.right.left_row
    return q0 * u + q1 * w


def _exterior_states(boundary: BoxBoundary, m: float) -> list[BoxState]:
    states = []
    # left half-line decays as (1, -s), right half-line as (1, s), s = kappa/(m+E)
    r0, r1 = boundary.left.left_row
    if r1 != 0 and r0 / r1 > 0:
        s = r0 / r1
        states.append(BoxState(m * (1 - s * s) / (1 + s * s), "outside", "left"))
    r0, r1 = boundary.right.right_row
    if r1 != 0 and -r0 / r1 > 0:
        s = -r0 / r1
        states.append(BoxState(m * (1 - s * s) / (1 + s * s), "outside", "right"))
    return states


def impermeable_box_spectrum(
    boundary: BoxBoundary | str,
    m: float,
    width: float,
    *,
    e_max: float | None = None,
    grid: int = 20000,
) -> BoxSpectrum:
    """
    Real energies of the confined problem between two impermeable points at ``+-width/2``.

    Interior levels are real roots of the exact box condition in
    ``[-e_max, e_max]`` (default ``6m``), bracketed on a grid and refined with
    ``brentq``; exterior bound states of the half-lines are listed with
    ``region="outside"``.
    """

    if isinstance(boundary, str):
        boundary = parse_boundary(boundary)
    if not isinstance(boundary, BoxBoundary):
        raise UnknownBoundary(f"Unknown boundary {boundary!r}")
    logger.warning(
        "Impermeable walls are placed at +-l/2 (box width l); captions quoting walls at +-l are not followed"
    )
    limit = 6.0 * m if e_max is None else e_max
    energies = np.linspace(-limit, limit, grid)
    values = _box_condition(boundary, energies, m, width)

    def condition(E: float) -> float:
        return float(_box_condition(boundary, np.array([E]), m, width)[0])

    roots: list[float] = [float(e) for e in energies[values == 0.0]]
    for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
        roots.append(brentq(condition, energies[i], energies[i + 1], xtol=1e-13 * m))
    roots.sort()
    states = [BoxState(e, "inside") for e in roots]
    states.extend(_exterior_states(boundary, m))
    states.sort(key=lambda s: (s.energy, s.region))
    return BoxSpectrum(boundary, states)
