from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest

from pointscatter.config import SeedSpec
from pointscatter.errors import UnknownFigure
from pointscatter.physics.lambda_algebra import LambdaParams, PhysicalStrengths, make_even_arrangement
from pointscatter.physics.special_cases import SpecialCaseId, instantiate
from pointscatter.physics.spectra import find_bound_states
from pointscatter.physics.transfer_core import scattering_amplitudes, single_point_limit
from pointscatter.reporting import (
    FIGURES,
    bound_state_frame,
    conversion_frame,
    export_workbook,
    frame_to_csv,
    generate_figure,
    limit_frame,
    scatter_frame,
    threshold_frame,
    to_json_text,
    write_datasets,
)


def _sample_frame() -> pd.DataFrame:
    return pd.DataFrame({"energy": [0.1, np.nan], "region": ["inside", "outside"]})


def test_csv_keeps_full_precision_and_lf_endings():
    text = frame_to_csv(_sample_frame())
    assert text.splitlines()[1] == "0.10000000000000001,inside"
    assert "\r" not in text
    assert text.endswith("\n")


def test_json_maps_nan_to_null():
    text = to_json_text(_sample_frame())
    assert json.loads(text) == [{"energy": 0.1, "region": "inside"}, {"energy": None, "region": "outside"}]
    assert text.endswith("\n")
    flags = json.loads(to_json_text(pd.DataFrame({"detected": [True, False], "count": [2, 0]})))
    assert flags == [{"detected": True, "count": 2}, {"detected": False, "count": 0}]


def test_write_datasets_names_files_after_stem(tmp_path):
    datasets = {"bound_states": _sample_frame(), "thresholds": _sample_frame()}
    written = write_datasets(datasets, tmp_path, "csv", stem="bound-states")
    assert sorted(path.name for path in written) == ["bound-states_bound_states.csv", "bound-states_thresholds.csv"]
    written = write_datasets(datasets, tmp_path / "json", "json")
    assert all(path.suffix == ".json" for path in written)


def test_workbook_export_to_bytes_and_disk(tmp_path):
    datasets = {"a": _sample_frame(), "b": _sample_frame()}
    assert export_workbook(datasets)[:2] == b"PK"
    (path,) = write_datasets(datasets, tmp_path, "xlsx", stem="run")
    assert path.name == "run.xlsx"
    assert path.stat().st_size > 0


def test_bound_and_threshold_frames():
    arr = instantiate(SpecialCaseId.parse("even/equal-mixture", -0.5), 2.0, 1.0)
    report = find_bound_states(arr)
    bound = bound_state_frame(report, arr)
    assert list(bound.columns) == ["energy", "energy_over_m", "residual", "branch"]
    assert len(bound) == 2
    np.testing.assert_allclose(bound["energy_over_m"], bound["energy"] / 2.0)

    thresholds = threshold_frame(report, arr)
    assert thresholds["kind"].to_list() == ["critical", "supercritical"]
    assert thresholds["detected"].to_list() == [False, True]


def test_conversion_frame_leaves_impermeable_lambda_empty():
    frame = conversion_frame([(PhysicalStrengths(B=2.0), None, False), (None, LambdaParams.identity(), True)])
    assert frame["permeable"].to_list() == [False, True]
    assert np.isnan(frame.loc[0, "phi"])
    assert np.isnan(frame.loc[1, "B"])
    assert frame.loc[1, "a"] == 1.0


def test_limit_and_scatter_frames():
    arr = make_even_arrangement(LambdaParams(0.0, 2.0, 1.0, 1.0, 1.0), 2.0, 0.5)
    frame = limit_frame(*single_point_limit(arr))
    assert len(frame) == 4
    assert (frame["parity_class"] == "even").all()

    scatter = scatter_frame(scattering_amplitudes(arr, np.linspace(2.5, 8.0, 5)))
    np.testing.assert_allclose(scatter["R"] + scatter["T"], 1.0, atol=1e-11)


def test_bound_state_figure_reproduces_its_anchors():
    result = generate_figure(1)
    assert result.case == "even/equal-mixture"
    assert set(result.datasets) == {"bound_states", "scan", "anchors"}
    assert result.anchors_match
    critical = result.anchors[result.anchors["check"] == "critical"]
    assert critical["strength"].to_list() == [0.0, -0.25]


def test_resonance_figure_verifies_every_pole():
    seeds = SeedSpec(nx=24, ny=12, re_min=-4.0, re_max=4.0)
    result = generate_figure(8, seeds=seeds, locus_grid=(60, 40))
    assert set(result.datasets) == {"poles", "loci", "anchors"}
    assert result.anchors_match
    assert result.datasets["poles"]["verified"].all()


@pytest.mark.parametrize("figure_id", range(1, 11))
def test_figures_match_their_anchors(figure_id):
    seeds = SeedSpec(nx=32, ny=16)
    result = generate_figure(figure_id, seeds=seeds, locus_grid=(60, 40))
    assert result.figure_id == figure_id
    assert result.anchors_match, result.anchors[~result.anchors["match"]]
    if FIGURES[figure_id].kind == "bound":
        assert set(result.datasets) == {"bound_states", "scan", "anchors"}
    else:
        assert result.datasets["poles"]["verified"].all()


def test_figure_registry_and_unknown_ids():
    assert sorted(FIGURES) == list(range(1, 15))
    with pytest.raises(UnknownFigure):
        generate_figure(99)
