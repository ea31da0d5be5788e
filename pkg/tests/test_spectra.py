from __future__ import annotations

import math

import numpy as np
import pytest

from pointscatter.config import ScanSpec
from pointscatter.physics.lambda_algebra import LambdaParams, Parity, make_even_arrangement, make_odd_arrangement
from pointscatter.physics.special_cases import CaseKind, SpecialCaseId, expectations, instantiate
from pointscatter.physics.spectra import (
    SpectrumMethod,
    bracket_roots,
    check_critical,
    check_supercritical,
    count_bound_states,
    find_bound_states,
)


def _sample_case(parity: Parity, kind: CaseKind, strength: float, m: float = 2.0, l: float = 1.0):
    return instantiate(SpecialCaseId(parity, kind, strength), m, l)


def test_even_equal_mixture_critical_only_at_encoded_strengths():
    for g in (-0.25, 0.0):
        assert check_critical(_sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, g)).detected

    for g in np.linspace(-1.0, 0.5, 200):
        if min(abs(g + 0.25), abs(g)) < 1e-6:
            continue
        assert not check_critical(_sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, float(g))).detected


def test_even_equal_mixture_is_always_supercritical():
    for g in (-1.0, -0.3, 0.2, 0.5):
        assert check_supercritical(_sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, g)).detected


def test_even_electrostatic_threshold_strengths():
    root5 = math.sqrt(5.0)
    super_strength = 2.0 * (-2.0 + root5)
    crit_strength = 2.0 * (2.0 + root5)
    assert round(super_strength, 2) == 0.47
    assert round(crit_strength, 1) == 8.5

    assert check_supercritical(_sample_case(Parity.EVEN, CaseKind.ELECTROSTATIC, super_strength)).detected
    assert check_critical(_sample_case(Parity.EVEN, CaseKind.ELECTROSTATIC, crit_strength)).detected
    assert not check_critical(_sample_case(Parity.EVEN, CaseKind.ELECTROSTATIC, super_strength)).detected

    expect = expectations(SpecialCaseId(Parity.EVEN, CaseKind.ELECTROSTATIC), 2.0, 1.0)
    assert super_strength == pytest.approx(expect.supercritical_values[2], abs=1e-9)
    assert crit_strength == pytest.approx(expect.critical_values[2], abs=1e-9)


def test_even_scalar_pair_triggers_both_thresholds():
    b_minus = -2.0 * (2.0 - math.sqrt(3.0))
    b_plus = 4.0 / b_minus
    assert round(b_minus, 2) == -0.54
    assert b_plus == pytest.approx(-2.0 * (2.0 + math.sqrt(3.0)))
    for b in (b_minus, b_plus):
        arr = _sample_case(Parity.EVEN, CaseKind.SCALAR, b)
        assert check_critical(arr).detected
        assert check_supercritical(arr).detected


def test_even_scalar_pair_needs_long_separation():
    expect = expectations(SpecialCaseId(Parity.EVEN, CaseKind.SCALAR), 2.0, 0.4)
    assert expect.critical_values == [0.0]
    assert expect.supercritical_values == [0.0]
    for b in np.linspace(-6.0, -0.1, 40):
        if abs(b + 2.0) < 0.05:
            continue
        arr = _sample_case(Parity.EVEN, CaseKind.SCALAR, float(b), l=0.4)
        assert not check_critical(arr).detected


def test_bound_states_of_even_equal_mixture():
    report = find_bound_states(_sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, -0.5))
    assert len(report.bound_states) == 2
    assert all(-2.0 < E < 2.0 for E in report.energies)
    assert report.energies == sorted(report.energies)
    assert report.has_supercritical
    assert not report.has_critical


def test_bound_states_single_well_regime():
    assert count_bound_states(_sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, -0.1)) == 1
    assert count_bound_states(_sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, 0.3)) == 0


@pytest.mark.parametrize(
    ("parity", "kind", "strength", "partner"),
    [
        (Parity.EVEN, CaseKind.ELECTROSTATIC, 0.7, -4.0 / 0.7),
        (Parity.EVEN, CaseKind.ELECTROSTATIC, 1.3, -4.0 / 1.3),
        (Parity.EVEN, CaseKind.ELECTROSTATIC, -1.5, 4.0 / 1.5),
        (Parity.EVEN, CaseKind.SCALAR, -1.0, -4.0),
        (Parity.EVEN, CaseKind.SCALAR, -1.2, 4.0 / -1.2),
        (Parity.EVEN, CaseKind.SCALAR, -3.0, 4.0 / -3.0),
        (Parity.ODD, CaseKind.EQUAL_MIXTURE, 0.4, -0.4),
        (Parity.ODD, CaseKind.EQUAL_MIXTURE, 0.7, -0.7),
        (Parity.ODD, CaseKind.EQUAL_MIXTURE, 1.1, -1.1),
    ],
)
def test_bound_spectra_follow_strength_symmetries(parity, kind, strength, partner):
    energies = find_bound_states(_sample_case(parity, kind, strength)).energies
    mirrored = find_bound_states(_sample_case(parity, kind, partner)).energies
    assert energies
    assert mirrored == pytest.approx(energies, abs=1e-10)


def test_closed_form_verification_tags_even_branches():
    arr = _sample_case(Parity.EVEN, CaseKind.EQUAL_MIXTURE, -0.5)
    report = find_bound_states(arr, ScanSpec(verify_closed_form=True))
    assert report.method is SpectrumMethod.EVEN_CLOSED_FORM
    assert sorted(state.branch for state in report.bound_states) == ["+", "-"]


def test_closed_form_verification_for_odd_arrangement():
    arr = _sample_case(Parity.ODD, CaseKind.SCALAR, 1.0)
    report = find_bound_states(arr, verify=True)
    assert report.method is SpectrumMethod.ODD_CLOSED_FORM
    assert len(report.bound_states) == 2
    low, high = report.energies
    assert low == pytest.approx(-high, abs=1e-9)


def test_odd_arrangement_without_off_diagonal_has_no_bound_states():
    lam = LambdaParams(0.3, 1.7, 0.0, 0.0, 1.0 / 1.7)
    assert find_bound_states(make_odd_arrangement(lam, 2.0, 1.0)).bound_states == []


def test_pseudoscalar_has_no_bound_states():
    for parity in (Parity.EVEN, Parity.ODD):
        for w in (-3.0, -1.0, 0.5, 1.5, 3.5):
            assert find_bound_states(_sample_case(parity, CaseKind.PSEUDOSCALAR, w)).bound_states == []


def test_identity_arrangement_is_free():
    report = find_bound_states(make_even_arrangement(LambdaParams.identity(), 2.0, 1.0))
    assert report.bound_states == []
    assert report.has_critical and report.has_supercritical


def test_bracket_roots_splits_close_pairs():
    def func(x: float) -> float:
        return (x - 0.5) ** 2 - 1e-8

    grid = np.linspace(0.03, 1.03, 11)
    values = np.array([func(x) for x in grid])
    roots = bracket_roots(func, grid, values, 1e-14)
    assert roots == pytest.approx([0.5 - 1e-4, 0.5 + 1e-4], abs=1e-10)


def test_bracket_roots_ignores_dips_above_zero():
    def func(x: float) -> float:
        return (x - 0.5) ** 2 + 1e-3

    grid = np.linspace(0.0, 1.0, 11)
    values = np.array([func(x) for x in grid])
    assert bracket_roots(func, grid, values, 1e-14) == []
