"""Critical, supercritical and bound-state detection for two point interactions."""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..config import DEFAULT_TOLERANCES, ScanSpec, Tolerances
from ..errors import ClosedFormMismatch, GridTooCoarse
from ..parallel import partitioned_map
from .lambda_algebra import Arrangement, Parity
from .transfer_core import _n_entries, critical_transfer, m22_with_scale, supercritical_transfer

logger = logging.getLogger(__name__)


class SpectrumMethod(str, Enum):
    GENERAL = "general"
    EVEN_CLOSED_FORM = "even_closed_form"
    ODD_CLOSED_FORM = "odd_closed_form"


class ThresholdCheck(NamedTuple):
    detected: bool
    residual: float


@dataclass(frozen=True, slots=True)
class BoundState:
    energy: float
    residual: float
    branch: str | None = None


@dataclass(slots=True)
class SpectrumReport:
    bound_states: list[BoundState] = field(default_factory=list)
    critical: ThresholdCheck = ThresholdCheck(False, float("nan"))
    supercritical: ThresholdCheck = ThresholdCheck(False, float("nan"))
    method: SpectrumMethod = SpectrumMethod.GENERAL

    @property
    def energies(self) -> list[float]:
        return [state.energy for state in self.bound_states]

    @property
    def has_critical(self) -> bool:
        return self.critical.detected

    @property
    def has_supercritical(self) -> bool:
        return self.supercritical.detected


# --- threshold states -------------------------------------------------------


def _threshold_closed_form(arr: Arrangement, critical: bool) -> complex | None:
    p, ml = arr.lambda1, arr.mass * arr.separation
    a, b, c, d = p.a, p.b, p.c, p.d
    if arr.parity is Parity.EVEN:
        return -2j * c * (a + c * ml) if critical else 2j * b * (d + b * ml)
    if arr.parity is Parity.ODD:
        return 1j * c * (a - d + 2 * ml * c) if critical else 1j * b * (a - d - 2 * ml * b)
    return None


def _threshold(arr: Arrangement, critical: bool, tol: Tolerances) -> ThresholdCheck:
    label = "critical" if critical else "supercritical"
    tm = critical_transfer(arr) if critical else supercritical_transfer(arr)
    residual = abs(tm.m12)
    scale = max(1.0, float(np.abs(tm.matrix).max()))
    detected = residual < tol.threshold * scale

    closed = _threshold_closed_form(arr, critical)
    if closed is not None:
        expected = abs(closed)
        if abs(residual - expected) > tol.closed_form * max(scale, expected):
            raise ClosedFormMismatch(
                f"{label} M12 = {residual!r} disagrees with the {arr.parity.value} closed form {expected!r}"
            )
    logger.debug("%s check: |M12| = %.3e (detected=%s)", label, residual, detected)
    return ThresholdCheck(bool(detected), float(residual))


def check_critical(arr: Arrangement, *, tol: Tolerances | None = None) -> ThresholdCheck:
    """Zero-momentum state at ``E = +m``: ``M12`` of the critical transfer matrix vanishes."""
    return _threshold(arr, True, tol or DEFAULT_TOLERANCES)


def check_supercritical(arr: Arrangement, *, tol: Tolerances | None = None) -> ThresholdCheck:
    """Zero-momentum state at ``E = -m``."""
    return _threshold(arr, False, tol or DEFAULT_TOLERANCES)


# --- bound states -----------------------------------------------------------


def _real_residual(arr: Arrangement, energies: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    values, scale = m22_with_scale(arr, np.asarray(energies, dtype=float), tol=tol)
    rotated = values * cmath.exp(-1j * arr.total_phase)
    leak = np.abs(rotated.imag) > tol.bound_residual * np.maximum(1.0, scale)
    if np.any(leak):
        logger.warning("Phase-removed M22 has a non-negligible imaginary part at %d energies", int(leak.sum()))
    return rotated.real, scale


def _branch_residuals(arr: Arrangement, E: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Even arrangements factor as ``(X - Y e^{-kappa l})(X + Y e^{-kappa l})``."""
    m = arr.mass
    kappa = np.sqrt(m * m - E * E)
    q = 1j * kappa / (E + m)
    _, n12, _, n22 = _n_entries(arr.lambda1, q)
    decay = np.exp(-kappa * arr.separation)
    x, y = n22.real, n12.real
    return x - y * decay, x + y * decay


def _odd_residual(arr: Arrangement, E: float) -> tuple[float, float]:
    """Odd condition ``XZ + Y^2 e^{-2 kappa l}`` and the slack of its necessary inequality."""
    p, m = arr.lambda1, arr.mass
    kappa = np.sqrt(m * m - E * E)
    s = kappa / (m + E)
    x = 0.5 * (p.a + p.d + p.b * s + p.c / s)
    z = 0.5 * (p.a + p.d - p.b * s - p.c / s)
    y = 0.5 * (p.a - p.d + p.b * s - p.c / s)
    residual = x * z + y * y * np.exp(-2 * kappa * arr.separation)
    slack = abs(p.b * s + p.c / s) - abs(p.a + p.d)
    return float(residual), float(slack)


def _dip_candidates(grid: np.ndarray, values: np.ndarray) -> list[int]:
    """Interior samples where a parabola through three same-sign neighbours dips towards zero."""
    if values.size < 3:
        return []
    left, mid, right = values[:-2], values[1:-1], values[2:]
    sign = np.sign(mid)
    same = (sign != 0) & (np.sign(left) == sign) & (np.sign(right) == sign)
    lowest = same & (np.abs(mid) < np.abs(left)) & (np.abs(mid) <= np.abs(right))
    found = []
    for j in np.flatnonzero(lowest):
        x = grid[j : j + 3] - grid[j + 1]
        y = sign[j] * values[j : j + 3]
        a, b, c = np.polyfit(x, y, 2)
        if a > 0 and c - b * b / (4 * a) <= 0.25 * y[1]:
            found.append(int(j + 1))
    return found


def bracket_roots(func, grid: np.ndarray, values: np.ndarray, xtol: float) -> list[float]:
    """
    Real roots of ``func`` from its samples ``values`` on ``grid``.

    Sign changes are refined with ``brentq``. Two roots closer than the grid
    spacing leave no sign change, only a dip; such dips are minimised and
    split into two brackets when the minimum crosses zero.
    """
    roots: list[float] = []
    exact = np.flatnonzero(values == 0.0)
    roots.extend(float(grid[i]) for i in exact)
    crossings = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    for i in crossings:
        roots.append(float(brentq(func, grid[i], grid[i + 1], xtol=xtol, maxiter=200)))
    for i in _dip_candidates(grid, values):
        lo, hi = float(grid[i - 1]), float(grid[i + 1])
        sign = float(np.sign(values[i]))
        best = minimize_scalar(
            lambda x: sign * func(x), bounds=(lo, hi), method="bounded", options={"xatol": xtol}
        )
        x = float(best.x)
        if sign * func(x) < 0:
            roots.append(float(brentq(func, lo, x, xtol=xtol, maxiter=200)))
            roots.append(float(brentq(func, x, hi, xtol=xtol, maxiter=200)))
            logger.debug("Split a close root pair near %.12g", x)
    return sorted(roots)


def _scan_grid(arr: Arrangement, scan: ScanSpec) -> np.ndarray:
    m = arr.mass
    return np.linspace(-m + scan.endpoint_eps * m, m - scan.endpoint_eps * m, scan.grid)


def _dedupe(states: list[BoundState], spacing: float) -> list[BoundState]:
    kept: list[BoundState] = []
    for state in sorted(states, key=lambda s: s.energy):
        if kept and abs(state.energy - kept[-1].energy) <= spacing:
            if state.residual < kept[-1].residual:
                kept[-1] = state
            continue
        kept.append(state)
    return kept


def find_bound_states(
    arr: Arrangement,
    scan: ScanSpec | None = None,
    *,
    tol: Tolerances | None = None,
    verify: bool | None = None,
) -> SpectrumReport:
    """
    Bound states as real zeros of ``M22`` with ``k = i kappa`` on ``(-m, m)``.

    Parameters
    ----------
    arr:
        Permeable arrangement.
    scan:
        Grid size, endpoint exclusion and bisection resolution.
    verify:
        Cross-check roots against the even or odd closed conditions. Defaults
        to ``scan.verify_closed_form``; ignored for general arrangements.

    Returns
    -------
    SpectrumReport
        Roots sorted ascending together with the threshold checks.

    Raises
    ------
    GridTooCoarse
        When the even branch factors resolve more roots than the general scan.
    ClosedFormMismatch
        When a root fails the closed condition of its parity class.
    """

    scan = scan or ScanSpec()
    tol = tol or DEFAULT_TOLERANCES
    verify = scan.verify_closed_form if verify is None else verify
    m = arr.mass

    grid = _scan_grid(arr, scan)
    values = partitioned_map(lambda chunk: _real_residual(arr, chunk, tol)[0], grid, threads=scan.threads)

    def residual_at(E: float) -> float:
        return float(_real_residual(arr, np.array([E]), tol)[0][0])

    states: list[BoundState] = []
    for root in bracket_roots(residual_at, grid, values, scan.xtol * m):
        value, scale = _real_residual(arr, np.array([root]), tol)
        if abs(value[0]) > tol.bound_residual * max(1.0, float(scale[0])):
            logger.warning("Discarding sign change at E=%.12g: residual %.3e", root, abs(value[0]))
            continue
        states.append(BoundState(root, float(abs(value[0]))))
    states = _dedupe(states, tol.dedupe * m)

    method = SpectrumMethod.GENERAL
    if verify and arr.parity is Parity.EVEN:
        states = _verify_even(arr, grid, states, scan, tol)
        method = SpectrumMethod.EVEN_CLOSED_FORM
    elif verify and arr.parity is Parity.ODD:
        _verify_odd(arr, states, tol)
        method = SpectrumMethod.ODD_CLOSED_FORM
    elif verify:
        logger.warning("Closed-form verification skipped: the arrangement is neither even nor odd")

    report = SpectrumReport(
        bound_states=states,
        critical=check_critical(arr, tol=tol),
        supercritical=check_supercritical(arr, tol=tol),
        method=method,
    )
    logger.info("Found %d bound states (%s)", len(states), method.value)
    return report


def _verify_even(
    arr: Arrangement, grid: np.ndarray, states: list[BoundState], scan: ScanSpec, tol: Tolerances
) -> list[BoundState]:
    plus, minus = _branch_residuals(arr, grid)
    branch_roots: dict[str, list[float]] = {}
    for label, index, values in (("+", 0, plus), ("-", 1, minus)):
        def branch(E: float, index: int = index) -> float:
            return float(_branch_residuals(arr, np.array([E]))[index][0])

        branch_roots[label] = bracket_roots(branch, grid, values, scan.xtol * arr.mass)

    total = sum(len(roots) for roots in branch_roots.values())
    if total > len(states):
        raise GridTooCoarse(
            f"Closed-form branches found {total} roots but the general scan resolved {len(states)}; "
            f"increase the grid (currently {scan.grid})"
        )

    p = arr.lambda1
    tagged: list[BoundState] = []
    for state in states:
        p_res, m_res = (abs(v[0]) for v in _branch_residuals(arr, np.array([state.energy])))
        s = np.sqrt(arr.mass**2 - state.energy**2) / (arr.mass + state.energy)
        scale = 1.0 + abs(p.a) + abs(p.d) + abs(p.b) * s + abs(p.c) / s
        # the scan root is only resolved to xtol, so the branch residual is compared loosely
        limit = 1e3 * tol.closed_form * scale
        if min(p_res, m_res) > limit:
            raise ClosedFormMismatch(f"Bound state E={state.energy!r} zeros neither even branch")
        branch = None
        if p_res <= limit < m_res:
            branch = "+"
        elif m_res <= limit < p_res:
            branch = "-"
        tagged.append(BoundState(state.energy, state.residual, branch))
    return tagged


def _verify_odd(arr: Arrangement, states: list[BoundState], tol: Tolerances) -> None:
    p = arr.lambda1
    for state in states:
        residual, slack = _odd_residual(arr, state.energy)
        s = np.sqrt(arr.mass**2 - state.energy**2) / (arr.mass + state.energy)
        scale = (1.0 + abs(p.a) + abs(p.d) + abs(p.b) * s + abs(p.c) / s) ** 2
        if abs(residual) > 1e3 * tol.closed_form * scale or slack < -1e-6 * scale:
            raise ClosedFormMismatch(f"Bound state E={state.energy!r} violates the odd condition")


def count_bound_states(arr: Arrangement, *, tol: Tolerances | None = None) -> int:
    return len(find_bound_states(arr, tol=tol).bound_states)
