from __future__ import annotations

import math

import numpy as np
import pytest

from pointscatter.errors import InvalidInput, SingularMatrix
from pointscatter.physics.lambda_algebra import (
    LambdaParams,
    Parity,
    make_arrangement,
    make_even_arrangement,
    make_odd_arrangement,
)
from pointscatter.physics.special_cases import CaseKind, SpecialCaseId, instantiate
from pointscatter.physics.spectra import find_bound_states
from pointscatter.physics.transfer_core import (
    MatrixKind,
    ParityClass,
    connection_matrix,
    critical_transfer,
    m22_values,
    momentum,
    plane_wave_matrix,
    s_matrix,
    scattering_amplitudes,
    single_point_limit,
    supercritical_transfer,
    transfer_entries,
    transfer_matrix,
    transfer_matrix_at,
)


def _sample_lambda(rng: np.random.Generator) -> LambdaParams:
    a = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    b, c = rng.uniform(-2.0, 2.0, size=2)
    return LambdaParams(rng.uniform(0.0, math.pi), a, b, c, (1.0 + b * c) / a)


def _sample_mild_lambda(rng: np.random.Generator) -> LambdaParams:
    a = rng.uniform(0.8, 1.25)
    b, c = rng.uniform(-1.0, 1.0, size=2)
    return LambdaParams(rng.uniform(0.0, math.pi), a, b, c, (1.0 + b * c) / a)


def _sample_arrangement(rng: np.random.Generator, m: float = 2.0):
    return make_arrangement(_sample_lambda(rng), _sample_lambda(rng), m, rng.uniform(0.1, 3.0))


def test_momentum_uses_principal_branch():
    assert momentum(3.0, 2.0) == pytest.approx(math.sqrt(5.0))
    assert momentum(0.0, 2.0) == pytest.approx(2.0j)
    assert momentum(-3.0, 2.0) == pytest.approx(-math.sqrt(5.0))


def test_plane_wave_matrix_is_singular_at_threshold():
    with pytest.raises(SingularMatrix):
        plane_wave_matrix(0.0, 2.0, 0.5, 2.0)
    arr = make_even_arrangement(LambdaParams.identity(), 2.0, 1.0)
    with pytest.raises(SingularMatrix):
        transfer_matrix(arr, 2.0)


def test_free_arrangement_has_identity_transfer():
    arr = make_even_arrangement(LambdaParams.identity(), 2.0, 1.0)
    np.testing.assert_allclose(transfer_matrix(arr, 3.5).matrix, np.eye(2), atol=1e-12)


def test_determinant_is_the_total_phase():
    rng = np.random.default_rng(21)
    for _ in range(200):
        arr = _sample_arrangement(rng)
        E = rng.uniform(2.1, 12.0) * rng.choice([-1.0, 1.0])
        expected = np.exp(2j * arr.total_phase)
        assert transfer_matrix(arr, E).det == pytest.approx(expected, abs=1e-10)


def test_vectorised_entries_match_matrix_products():
    rng = np.random.default_rng(2)
    for _ in range(50):
        arr = _sample_arrangement(rng)
        energies = np.array([2.5, 4.0 - 0.3j, -5.0, 0.7 + 0.1j])
        entries = transfer_entries(arr, energies)
        m22 = m22_values(arr, energies)
        for index, E in enumerate(energies):
            full = transfer_matrix(arr, E).matrix
            np.testing.assert_allclose(
                [entries[0][index], entries[1][index], entries[2][index], entries[3][index]],
                full.ravel(),
                rtol=1e-10,
                atol=1e-10,
            )
            assert m22[index] == pytest.approx(full[1, 1], rel=1e-10, abs=1e-10)


def test_unitarity_on_random_arrangements():
    rng = np.random.default_rng(1234)
    m = 2.0
    energies = np.linspace(1.01 * m, 5.99 * m, 20)
    worst = 0.0
    for _ in range(1000):
        amplitudes = scattering_amplitudes(_sample_arrangement(rng, m), energies)
        worst = max(worst, float(amplitudes.unitarity_defect.max()))
    assert worst < 1e-12


def test_phase_shift_keeps_the_zeros_of_m22():
    rng = np.random.default_rng(40)
    energies = np.array([0.3, -1.1, 3.0 - 0.4j, -4.5 - 1.2j, 7.0])
    for _ in range(50):
        lam = _sample_lambda(rng)
        delta = rng.uniform(0.1, 3.0)
        for arr in (
            make_even_arrangement(lam, 2.0, 1.0),
            make_odd_arrangement(lam, 2.0, 1.0),
            make_arrangement(lam, _sample_lambda(rng), 2.0, 1.0),
        ):
            shifted = arr.with_phase_shift(delta)
            assert shifted.parity is arr.parity
            np.testing.assert_allclose(
                np.abs(m22_values(shifted, energies)), np.abs(m22_values(arr, energies)), rtol=1e-10, atol=1e-12
            )

    arr = instantiate(SpecialCaseId(Parity.EVEN, CaseKind.EQUAL_MIXTURE, -0.5), 2.0, 1.0)
    base = find_bound_states(arr).energies
    assert len(base) == 2
    assert find_bound_states(arr.with_phase_shift(0.7)).energies == pytest.approx(base, abs=1e-10)


def test_magnetostatic_pair_is_transparent():
    energies = np.linspace(2.1, 11.0, 25)
    for parity in (Parity.EVEN, Parity.ODD):
        for g in (-3.0, 0.4, 1.5):
            arr = instantiate(SpecialCaseId(parity, CaseKind.MAGNETOSTATIC, g), 2.0, 1.0)
            for E in (2.5, -3.0, 6.0):
                matrix = transfer_matrix(arr, E).matrix
                np.testing.assert_allclose(matrix, matrix[0, 0] * np.eye(2), atol=1e-12)
                assert abs(matrix[0, 0]) == pytest.approx(1.0, abs=1e-12)
            amplitudes = scattering_amplitudes(arr, energies)
            np.testing.assert_allclose(np.abs(amplitudes.t), 1.0, atol=1e-12)
            np.testing.assert_allclose(np.abs(amplitudes.r), 0.0, atol=1e-12)


def test_shifting_both_points_only_rephases_off_diagonal_entries():
    rng = np.random.default_rng(4)
    for _ in range(50):
        first, second = _sample_lambda(rng), _sample_lambda(rng)
        base = transfer_matrix_at(first, second, -0.5, 0.5, 3.0, 2.0)
        shifted = transfer_matrix_at(first, second, 1.2, 2.2, 3.0, 2.0)
        np.testing.assert_allclose(np.diag(shifted), np.diag(base), rtol=1e-9, atol=1e-9)
        np.testing.assert_allclose(np.abs(shifted), np.abs(base), rtol=1e-9, atol=1e-9)

    arr = make_even_arrangement(first, 2.0, 1.0)
    np.testing.assert_allclose(
        transfer_matrix_at(arr.lambda1, arr.lambda2, -0.5, 0.5, 3.0, 2.0), transfer_matrix(arr, 3.0).matrix
    )


def test_threshold_transfers_match_closed_forms():
    rng = np.random.default_rng(31)
    for _ in range(200):
        lam = _sample_lambda(rng)
        l = rng.uniform(0.1, 3.0)
        ml = 2.0 * l
        a, b, c, d = lam.a, lam.b, lam.c, lam.d

        even = make_even_arrangement(lam, 2.0, l)
        critical = critical_transfer(even)
        assert critical.kind is MatrixKind.CRITICAL
        assert critical.energy == 2.0
        assert abs(critical.m12) == pytest.approx(abs(2 * c * (a + c * ml)), rel=1e-9, abs=1e-9)
        assert abs(supercritical_transfer(even).m12) == pytest.approx(abs(2 * b * (d + b * ml)), rel=1e-9, abs=1e-9)

        odd = make_odd_arrangement(lam, 2.0, l)
        assert abs(critical_transfer(odd).m12) == pytest.approx(abs(c * (a - d + 2 * ml * c)), rel=1e-9, abs=1e-9)
        supercritical = supercritical_transfer(odd)
        assert supercritical.energy == -2.0
        assert abs(supercritical.m12) == pytest.approx(abs(b * (a - d - 2 * ml * b)), rel=1e-9, abs=1e-9)


def test_scattering_needs_energies_above_threshold():
    arr = make_even_arrangement(LambdaParams.identity(), 2.0, 1.0)
    with pytest.raises(InvalidInput):
        scattering_amplitudes(arr, [1.0, 3.0])


def test_s_matrix_columns_are_normalised():
    rng = np.random.default_rng(8)
    arr = _sample_arrangement(rng)
    s = s_matrix(arr, 5.0)
    assert np.abs(s[:, 0]) @ np.abs(s[:, 0]) == pytest.approx(1.0, abs=1e-10)


def test_connection_matrix_collapses_to_product_for_tiny_separation():
    rng = np.random.default_rng(9)
    for _ in range(50):
        first, second = _sample_mild_lambda(rng), _sample_mild_lambda(rng)
        arr = make_arrangement(first, second, 2.0, 1e-8)
        gamma = connection_matrix(arr, 3.0)
        np.testing.assert_allclose(gamma, second.matrix() @ first.matrix(), atol=1e-6)


def test_single_point_limits_match_matrix_products():
    rng = np.random.default_rng(17)
    for _ in range(200):
        lam = _sample_lambda(rng)
        for arr in (make_even_arrangement(lam, 2.0, 1.0), make_odd_arrangement(lam, 2.0, 1.0)):
            matrix, _ = single_point_limit(arr)
            np.testing.assert_allclose(matrix, arr.lambda2.matrix() @ arr.lambda1.matrix(), atol=1e-12)


def test_even_limit_formula():
    lam = LambdaParams(0.0, 2.0, 1.0, 1.0, 1.0)
    matrix, parity_class = single_point_limit(make_even_arrangement(lam, 2.0, 0.5))
    np.testing.assert_allclose(matrix, [[3.0, 2.0j], [-4.0j, 3.0]], atol=1e-14)
    assert parity_class is ParityClass.EVEN


def test_odd_limit_classification_on_random_samples():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        phi = rng.uniform(0.0, math.pi)
        a = rng.uniform(1.1, 3.0) * rng.choice([-1.0, 1.0])
        diagonal = make_odd_arrangement(LambdaParams(phi, a, 0.0, 0.0, 1.0 / a), 2.0, 1.0)
        matrix, parity_class = single_point_limit(diagonal)
        assert parity_class is ParityClass.ODD
        np.testing.assert_allclose(matrix, np.exp(2j * phi) * np.diag([a * a, 1.0 / (a * a)]), atol=1e-12)

        b = rng.uniform(0.5, 2.0)
        gauge = make_odd_arrangement(LambdaParams(phi, a, b, (a * a - 1.0) / b, a), 2.0, 1.0)
        matrix, parity_class = single_point_limit(gauge)
        assert parity_class is ParityClass.SINGULAR_GAUGE
        np.testing.assert_allclose(matrix, np.exp(2j * phi) * np.eye(2), atol=1e-12)


def test_general_arrangement_has_no_single_point_limit():
    lam = LambdaParams.identity()
    with pytest.raises(InvalidInput):
        single_point_limit(make_arrangement(lam, lam, 2.0, 1.0))
