from __future__ import annotations

import math

import numpy as np
import pytest

from pointscatter.errors import DegenerateDenominator, ImpermeableInteraction, InvalidInput
from pointscatter.physics.lambda_algebra import (
    Arrangement,
    LambdaParams,
    Parity,
    PhysicalStrengths,
    even_partner,
    is_permeable,
    lambda_from_matrix,
    lambda_to_strengths,
    make_even_arrangement,
    make_odd_arrangement,
    odd_partner,
    strengths_to_lambda,
)


def _sample_lambda(rng: np.random.Generator) -> LambdaParams:
    a = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    b, c = rng.uniform(-2.0, 2.0, size=2)
    return LambdaParams(rng.uniform(0.0, math.pi), a, b, c, (1.0 + b * c) / a)


def _sample_strengths(rng: np.random.Generator) -> PhysicalStrengths:
    return PhysicalStrengths(*rng.uniform(-3.0, 3.0, size=4))


def test_equal_mixture_maps_to_lower_triangular_lambda():
    lam = strengths_to_lambda(PhysicalStrengths(B=0.3, A0=0.3))
    assert lam.as_tuple() == pytest.approx((0.0, 1.0, 0.0, 0.6, 1.0), abs=1e-15)


def test_pseudoscalar_maps_to_diagonal_lambda():
    lam = strengths_to_lambda(PhysicalStrengths(W=1.0))
    assert lam.phi == 0.0
    assert lam.a == pytest.approx(1.0 / 3.0)
    assert lam.d == pytest.approx(3.0)
    assert lam.b == pytest.approx(0.0, abs=1e-15)
    assert lam.c == pytest.approx(0.0, abs=1e-15)


def test_strength_round_trip_on_random_samples():
    rng = np.random.default_rng(7)
    samples = [_sample_strengths(rng) for _ in range(10_000)]
    sent = np.array([s.as_tuple() for s in samples])
    back = np.array([lambda_to_strengths(strengths_to_lambda(s)).as_tuple() for s in samples])
    np.testing.assert_allclose(back, sent, rtol=1e-10, atol=1e-10)


def test_lambda_round_trip_through_strengths():
    rng = np.random.default_rng(11)
    for _ in range(200):
        lam = _sample_lambda(rng)
        if abs(2.0 * math.cos(lam.phi) + lam.a + lam.d) < 0.1:
            continue
        again = strengths_to_lambda(lambda_to_strengths(lam))
        np.testing.assert_allclose(again.matrix(), lam.matrix(), atol=1e-9)


def test_phase_stays_in_half_open_interval():
    rng = np.random.default_rng(3)
    for _ in range(200):
        lam = strengths_to_lambda(_sample_strengths(rng))
        assert 0.0 <= lam.phi < math.pi
        assert lam.a * lam.d - lam.b * lam.c == pytest.approx(1.0, abs=1e-10)


def test_impermeable_strengths_are_rejected():
    strengths = PhysicalStrengths(B=2.0)
    assert not is_permeable(strengths)
    with pytest.raises(ImpermeableInteraction):
        strengths_to_lambda(strengths)


def test_magnetostatic_term_keeps_the_point_permeable():
    assert is_permeable(PhysicalStrengths(B=2.0, A1=0.1))
    assert not is_permeable(PhysicalStrengths(A0=math.inf))


def test_infinite_strengths_have_no_lambda():
    with pytest.raises(InvalidInput):
        strengths_to_lambda(PhysicalStrengths(W=math.inf))


def test_nan_strength_is_invalid():
    with pytest.raises(InvalidInput):
        PhysicalStrengths(B=float("nan"))


def test_lambda_validates_determinant_and_phase():
    with pytest.raises(InvalidInput):
        LambdaParams(0.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidInput):
        LambdaParams(math.pi, 1.0, 0.0, 0.0, 1.0)


def test_degenerate_denominator_raises():
    # 2 cos(phi) + a + d = 0
    with pytest.raises(DegenerateDenominator):
        lambda_to_strengths(LambdaParams(0.0, -1.0, 0.0, 0.0, -1.0))


def test_lambda_from_matrix_recovers_parameters():
    rng = np.random.default_rng(5)
    for _ in range(100):
        lam = _sample_lambda(rng)
        recovered = lambda_from_matrix(lam.matrix())
        np.testing.assert_allclose(recovered.matrix(), lam.matrix(), atol=1e-10)


def test_with_phase_folds_into_range():
    shifted = LambdaParams.identity().with_phase(math.pi + 0.3)
    assert shifted.phi == pytest.approx(0.3)
    np.testing.assert_allclose(shifted.matrix(), np.exp(1j * (math.pi + 0.3)) * np.eye(2), atol=1e-14)


def test_partners_are_involutions():
    rng = np.random.default_rng(13)
    for _ in range(100):
        lam = _sample_lambda(rng)
        np.testing.assert_allclose(even_partner(even_partner(lam)).matrix(), lam.matrix(), atol=1e-12)
        np.testing.assert_allclose(odd_partner(odd_partner(lam)).matrix(), lam.matrix(), atol=1e-12)


def test_even_partner_swaps_diagonal_and_conjugates_phase():
    lam = LambdaParams(0.4, 2.0, 0.5, 1.0, 0.75)
    partner = even_partner(lam)
    expected = np.exp(-0.4j) * np.array([[0.75, 0.5j], [-1.0j, 2.0]])
    np.testing.assert_allclose(partner.matrix(), expected, atol=1e-14)


def test_arrangement_positions_and_parity_pattern():
    lam = LambdaParams(0.0, 2.0, 1.0, 1.0, 1.0)
    arr = make_even_arrangement(lam, 2.0, 1.0)
    assert arr.positions == (-0.5, 0.5)
    assert arr.parity is Parity.EVEN
    assert make_odd_arrangement(lam, 2.0, 1.0).lambda2.b == -1.0

    with pytest.raises(InvalidInput):
        Arrangement(2.0, 1.0, lam, lam, Parity.EVEN)
    with pytest.raises(InvalidInput):
        Arrangement(0.0, 1.0, lam, lam)
    with pytest.raises(InvalidInput):
        Arrangement(2.0, -1.0, lam, lam)
