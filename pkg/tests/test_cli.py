from __future__ import annotations

import io
import json

import pandas as pd
import pytest

import cli
from pointscatter.errors import ConfigError


def _write_config(tmp_path, payload: dict):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_convert_case_to_json(tmp_path):
    out = tmp_path / "convert.json"
    code = cli.main(["convert", "--case", "even/equal-mixture", "--strength", "0.3", "--out", str(out)])
    assert code == cli.EXIT_OK
    (row,) = json.loads(out.read_text(encoding="utf-8"))
    assert row["B"] == pytest.approx(0.3)
    assert row["c"] == pytest.approx(0.6)
    assert row["permeable"] is True


def test_convert_flags_impermeable_points(tmp_path):
    out = tmp_path / "convert.csv"
    code = cli.main(["convert", "--strengths", "2", "0", "0", "0", "--out", str(out)])
    assert code == cli.EXIT_VALIDATION
    frame = pd.read_csv(out)
    assert not frame.loc[0, "permeable"]
    assert frame["phi"].isna().all()


def test_bound_states_write_one_file_per_dataset(tmp_path):
    out = tmp_path / "out"
    code = cli.main(
        ["bound-states", "--case", "even/equal-mixture", "--strength", "-0.5", "--out", str(out), "--format", "csv"]
    )
    assert code == cli.EXIT_OK
    bound = pd.read_csv(out / "bound-states_bound_states.csv")
    thresholds = pd.read_csv(out / "bound-states_thresholds.csv")
    assert len(bound) == 2
    assert thresholds["detected"].to_list() == [False, True]


def test_critical_prints_csv_to_stdout(capsys):
    code = cli.main(["critical", "--case", "even/equal-mixture", "--strength", "-0.25"])
    assert code == cli.EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert frame["detected"].to_list() == [True, True]


def test_limit_as_json_to_stdout(capsys):
    code = cli.main(["limit", "--lambda", "0", "2", "1", "1", "1", "--parity", "even", "--format", "json"])
    assert code == cli.EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 4
    assert {row["parity_class"] for row in rows} == {"even"}


def test_scatter_conserves_probability(tmp_path):
    out = tmp_path / "scatter.csv"
    code = cli.main(["scatter", "--case", "even/equal-mixture", "--strength", "0.5", "--out", str(out)])
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert len(frame) == 200
    assert frame["unitarity_defect"].max() < 1e-10
    assert frame["E"].min() > 2.0


def test_box_levels_written(tmp_path):
    out = tmp_path / "box.csv"
    code = cli.main(["box", "--boundary", "even/pseudoscalar:+", "--out", str(out)])
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert (frame["region"] == "inside").any()


def test_nonrel_ladder(tmp_path):
    out = tmp_path / "ladder.csv"
    code = cli.main(
        [
            "nonrel-check",
            "--case",
            "even/equal-mixture",
            "--strength",
            "-0.05",
            "--mass",
            "50",
            "--ladder",
            "-0.1",
            "-0.05",
            "-0.02",
            "--out",
            str(out),
        ]
    )
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert frame["status"].to_list() == ["compared"] * 3
    assert frame["trend"].notna().all()


@pytest.mark.parametrize(
    "argv",
    [
        ["bound-states", "--case", "even/vector", "--strength", "1"],
        ["bound-states", "--case", "even/scalar"],
        ["figure"],
        ["bound-states", "--config", "missing.json"],
        ["critical", "--case", "even/scalar", "--strength", "1", "--log-level", "LOUD"],
    ],
)
def test_validation_failures_exit_with_two(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == cli.EXIT_VALIDATION


def test_flags_override_the_run_document(tmp_path):
    path = _write_config(
        tmp_path,
        {"mass": 2.0, "separation": 0.5, "interaction": {"case": "odd/scalar", "strength": 1.0}, "scan": {"grid": 512}},
    )
    args = cli.parse_args(["bound-states", "--config", str(path), "--mass", "3", "--tol", "1e-8", "--grid", "100"])
    cfg = cli.build_config(args)
    assert cfg.mass == 3.0
    assert cfg.separation == 0.5
    assert cfg.scan.grid == 100
    assert cfg.tolerances.pole == 1e-8
    assert cfg.interaction.case == "odd/scalar"


def test_case_requires_strength():
    with pytest.raises(ConfigError):
        cli.build_config(cli.parse_args(["critical", "--case", "even/scalar"]))
