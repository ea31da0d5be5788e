"""Schrödinger-side matching conditions and bound-state oracles for the heavy-mass regime."""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..config import ScanSpec
from ..errors import InvalidInput, InvalidStrength
from .lambda_algebra import Parity
from .spectra import bracket_roots, find_bound_states
from .special_cases import CaseKind, SpecialCaseId, instantiate

logger = logging.getLogger(__name__)


class NonRelKind(str, Enum):
    DELTA = "delta"
    NONLOCAL_DELTA_PRIME = "nonlocal_delta_prime"
    LOCAL_DELTA_PRIME = "local_delta_prime"
    SINGULAR_GAUGE = "singular_gauge"


# family -> matching condition it reduces to
NONREL_KIND_FOR = {
    CaseKind.EQUAL_MIXTURE: NonRelKind.DELTA,
    CaseKind.INVERTED_MIXTURE: NonRelKind.NONLOCAL_DELTA_PRIME,
    CaseKind.PSEUDOSCALAR: NonRelKind.LOCAL_DELTA_PRIME,
    CaseKind.MAGNETOSTATIC: NonRelKind.SINGULAR_GAUGE,
}


@dataclass(frozen=True, slots=True)
class NonRelLambda:
    """Matching matrix acting on ``(u, u')`` across one point."""

    kind: NonRelKind
    matrix: np.ndarray
    strength: float
    mass: float

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.isreal(self.matrix)))


def nonrel_matching(kind: NonRelKind | str, strength: float, m: float) -> NonRelLambda:
    """
    Matching matrix of a Schrödinger point interaction.

    ``delta`` uses ``[[1, 0], [4mB, 1]]`` so that ``B < 0`` is attractive;
    ``nonlocal_delta_prime`` uses ``[[1, 2B/(2m)], [0, 1]]``; ``local_delta_prime``
    uses ``diag((2-W)/(2+W), (2+W)/(2-W))``; ``singular_gauge`` is the phase
    ``-exp(i arg(A1^2 - 4 + 4i A1))`` times the identity.

    Raises
    ------
    InvalidStrength
        For ``local_delta_prime`` at ``|W| = 2``.
    """

    kind = NonRelKind(kind)
    if not m > 0:
        raise InvalidInput(f"mass must be positive, got {m}")
    g = float(strength)
    if kind is NonRelKind.DELTA:
        matrix = np.array([[1.0, 0.0], [4.0 * m * g, 1.0]])
    elif kind is NonRelKind.NONLOCAL_DELTA_PRIME:
        matrix = np.array([[1.0, 2.0 * g / (2.0 * m)], [0.0, 1.0]])
    elif kind is NonRelKind.LOCAL_DELTA_PRIME:
        if abs(g) == 2.0:
            raise InvalidStrength(f"local delta-prime needs |W| != 2, got {g}")
        matrix = np.diag([(2.0 - g) / (2.0 + g), (2.0 + g) / (2.0 - g)])
    else:
        phase = cmath.phase(complex(g * g - 4.0, 4.0 * g))
        matrix = -cmath.exp(1j * phase) * np.eye(2, dtype=complex)
    return NonRelLambda(kind, matrix, g, m)


def _pair_condition(first: np.ndarray, second: np.ndarray, kappa: np.ndarray, l: float) -> np.ndarray:
    kappa = np.asarray(kappa, dtype=float)
    # propagator scaled by exp(-kappa l) to keep large separations finite
    decay = np.exp(-2.0 * kappa * l)
    ch, sh = 0.5 * (1.0 + decay), 0.5 * (1.0 - decay)
    u = first[0, 0] + first[0, 1] * kappa
    du = first[1, 0] + first[1, 1] * kappa
    u, du = ch * u + sh / kappa * du, kappa * sh * u + ch * du
    u, du = second[0, 0] * u + second[0, 1] * du, second[1, 0] * u + second[1, 1] * du
    return du + kappa * u


def schrodinger_pair_bound(
    first: NonRelLambda,
    second: NonRelLambda,
    m: float,
    l: float,
    *,
    kappa_range: tuple[float, float] | None = None,
    grid: int = 4000,
) -> list[float]:
    """
    Bound energies ``eps < 0`` of ``-u''/(2m) = eps u`` with two matching points a distance ``l`` apart.

    The decaying solution ``(1, kappa)`` enters from the left, crosses both
    points and the free interval, and must leave as ``u' = -kappa u``. Roots
    in ``kappa`` are bracketed on a geometric grid, close pairs included.
    """

    if not (first.is_real and second.is_real):
        # a pure phase leaves (u, u') continuous up to a constant: free problem
        if np.allclose(first.matrix, first.matrix[0, 0] * np.eye(2)) and np.allclose(
            second.matrix, second.matrix[0, 0] * np.eye(2)
        ):
            return []
        raise InvalidInput("Only real matching matrices or pure phases are supported")
    if l < 0:
        raise InvalidInput(f"separation must be non-negative, got {l}")
    a = np.real(first.matrix)
    b = np.real(second.matrix)
    low, high = kappa_range or (1e-9 * m, 1e3 * m)
    kappas = np.geomspace(low, high, grid)
    values = _pair_condition(a, b, kappas, l)

    def condition(k: float) -> float:
        return float(_pair_condition(a, b, np.array(k), l))

    roots = bracket_roots(condition, kappas, values, 1e-14 * m)
    energies = sorted(-(k * k) / (2.0 * m) for k in roots)
    logger.debug("Pair %s/%s: %d bound states", first.kind.value, second.kind.value, len(energies))
    return energies


def schrodinger_double_delta_bound(g1: float, g2: float, m: float, l: float) -> list[float]:
    return schrodinger_pair_bound(
        nonrel_matching(NonRelKind.DELTA, g1, m), nonrel_matching(NonRelKind.DELTA, g2, m), m, l
    )


class ConsistencyStatus(str, Enum):
    COMPARED = "compared"
    NO_BOUND_STATE_IN_EITHER_MODEL = "no_bound_state_in_either_model"
    ONLY_RELATIVISTIC = "only_relativistic"
    ONLY_NONRELATIVISTIC = "only_nonrelativistic"


@dataclass(slots=True)
class NonRelReport:
    case: str
    strength: float
    mass: float
    separation: float
    eps_rel: float | None
    eps_nr: float | None
    deviation: float | None
    status: ConsistencyStatus


def _pair_for(case: SpecialCaseId, m: float) -> tuple[NonRelLambda, NonRelLambda]:
    try:
        kind = NONREL_KIND_FOR[case.kind]
    except KeyError as exc:
        raise InvalidInput(f"{case.name} has no non-relativistic counterpart") from exc
    g = case.strength
    if kind is NonRelKind.LOCAL_DELTA_PRIME:
        # W flips sign at the mirror point of an even pair
        second = -g if case.parity is Parity.EVEN else g
    elif kind is NonRelKind.SINGULAR_GAUGE:
        second = g
    else:
        second = g if case.parity is Parity.EVEN else -g
    return nonrel_matching(kind, g, m), nonrel_matching(kind, second, m)


def nonrel_consistency_check(
    case: SpecialCaseId, strength: float | None, m: float, l: float, *, scan: ScanSpec | None = None
) -> NonRelReport:
    """
    Compare the relativistic particle ground state with its Schrödinger counterpart.

    ``eps_rel`` is ``E - m`` for the lowest bound state with ``E > 0``;
    ``eps_nr`` is the lowest energy of the matching Schrödinger pair.
    """

    if strength is not None:
        case = case.with_strength(strength)
    first, second = _pair_for(case, m)
    nr = schrodinger_pair_bound(first, second, m, l)

    rel_energies = [E for E in find_bound_states(instantiate(case, m, l), scan).energies if E > 0]
    eps_rel = min(rel_energies) - m if rel_energies else None
    eps_nr = nr[0] if nr else None

    if eps_rel is None and eps_nr is None:
        status, deviation = ConsistencyStatus.NO_BOUND_STATE_IN_EITHER_MODEL, None
    elif eps_nr is None:
        status, deviation = ConsistencyStatus.ONLY_RELATIVISTIC, None
    elif eps_rel is None:
        status, deviation = ConsistencyStatus.ONLY_NONRELATIVISTIC, None
    else:
        status = ConsistencyStatus.COMPARED
        deviation = abs(eps_rel - eps_nr) / abs(eps_nr)
    logger.info("%s at %g: eps_rel=%s eps_nr=%s (%s)", case.name, case.strength, eps_rel, eps_nr, status.value)
    return NonRelReport(case.name, case.strength, m, l, eps_rel, eps_nr, deviation, status)
