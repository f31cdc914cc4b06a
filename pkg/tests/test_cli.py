"""Tests for the jcm-berry command line."""

from __future__ import annotations

import io
import math

import numpy as np
import pandas as pd
import pytest

from jcm_berry.cli.main import main
from jcm_berry.cli.tables import TIMESTAMP_PREFIX, CsvTable, read_table


def _without_timestamp(path) -> list[str]:
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line for line in lines if not line.startswith(TIMESTAMP_PREFIX)]


def test_fig1_writes_table(tmp_path):
    out = tmp_path / "phases.csv"
    argv = ["fig1", "--m-list", "1,2", "--delta-range=-2:2", "--points", "5"]
    assert main([*argv, "--out", str(out)]) == 0
    frame = read_table(out)
    assert list(frame.columns) == ["delta_over_lambda", "gamma_01", "gamma_02"]
    assert len(frame) == 5
    resonant = frame.loc[frame["delta_over_lambda"] == 0.0].iloc[0]
    assert resonant["gamma_01"] == pytest.approx(math.pi)
    assert resonant["gamma_02"] == pytest.approx(2.0 * math.pi)
    header = out.read_text(encoding="utf-8").splitlines()[0]
    assert header.startswith("# jcm-berry ")


def test_fig1_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert main(["fig1", "--points", "11", "--out", str(path)]) == 0
    assert _without_timestamp(first) == _without_timestamp(second)


def test_fig1_rows_increase_with_m_and_match_endpoints(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["fig1", "--points", "41", "--out", str(out)]) == 0
    frame = read_table(out)
    phases = frame[["gamma_01", "gamma_02", "gamma_03", "gamma_04"]].to_numpy()
    assert len(frame) == 41
    assert np.all(np.diff(phases, axis=1) > 0.0)
    for m in (1, 2, 3, 4):
        # cos 2 theta = (100 - 4 m!) / (100 + 4 m!) at |Delta| = 10 lambda
        weight = 4.0 * math.factorial(m)
        expected = m * math.pi * weight / (100.0 + weight)
        column = frame[f"gamma_0{m}"]
        assert column.iloc[0] == pytest.approx(expected, rel=1e-12)
        assert column.iloc[-1] == pytest.approx(expected, rel=1e-12)
    assert frame["gamma_01"].iloc[0] == pytest.approx(math.pi / 26.0, rel=1e-12)


def test_figure_commands_keep_their_older_names(tmp_path):
    for canonical, alias in (("fig1", "vacuum-phases"), ("fig4", "fringes")):
        first, second = tmp_path / f"{canonical}.csv", tmp_path / f"{alias}.csv"
        assert main([canonical, "--points", "9", "--out", str(first)]) == 0
        assert main([alias, "--points", "9", "--out", str(second)]) == 0
        pd.testing.assert_frame_equal(read_table(first), read_table(second))


def test_fig4_accepts_preset_aliases(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["fig4", "--preset", "paper-fig4", "--points", "5", "--out", str(first)]) == 0
    assert main(["fig4", "--preset", "fringes", "--points", "5", "--out", str(second)]) == 0
    pd.testing.assert_frame_equal(read_table(first), read_table(second))


def test_table_values_survive_a_round_trip(tmp_path):
    values = [0.1, 1.0 / 3.0, math.pi, 1e-300, -2.5e17, math.sqrt(2.0), 6.02214076e23]
    out = tmp_path / "values.csv"
    CsvTable(pd.DataFrame({"value": values}), {"source": "round trip"}).write(out)
    assert read_table(out)["value"].tolist() == values


def test_fig4_command(tmp_path):
    out = tmp_path / "fig4.csv"
    assert main(["fig4", "--points", "9", "--out", str(out)]) == 0
    frame = read_table(out)
    assert list(frame.columns) == ["xi", "p2_no_berry", "p2_berry", "p2_dissipative"]
    assert frame["p2_no_berry"].iloc[0] == pytest.approx(0.0, abs=1e-15)
    assert frame["p2_berry"].iloc[0] == pytest.approx(0.1464466094067262, abs=1e-9)


def test_berry_wilson_residual(tmp_path):
    out = tmp_path / "berry.csv"
    argv = ["berry", "--m", "2", "--n", "1", "--branch", "-", "--delta-over-lambda", "1.5"]
    assert main([*argv, "--method", "wilson", "--out", str(out)]) == 0
    row = read_table(out).iloc[0]
    assert row["branch"] == -1
    assert row["residual"] <= 1e-6


def test_ramsey_to_stdout(capsys):
    assert main(["ramsey", "--gamma", repr(math.pi / 4.0)]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out), comment="#")
    assert list(frame.columns) == ["pulse_area_1", "pulse_area_2", "xi", "gamma", "p2"]
    assert frame["p2"].iloc[0] == pytest.approx(0.146447, abs=1e-6)


def test_ramsey_accepts_pi_multiples(capsys):
    assert main(["ramsey", "--gamma", "0", "--xi", "0.5pi"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out), comment="#")
    assert frame["xi"].iloc[0] == pytest.approx(math.pi / 2.0)
    assert frame["p2"].iloc[0] == pytest.approx(1.0)


def test_config_file_defaults_and_override(tmp_path):
    config = tmp_path / "phases.env"
    config.write_text("points = 5\nm-list = 1,2\n", encoding="utf-8")
    out = tmp_path / "phases.csv"
    assert main(["fig1", "--config", str(config), "--out", str(out)]) == 0
    frame = read_table(out)
    assert len(frame) == 5
    assert list(frame.columns)[1:] == ["gamma_01", "gamma_02"]
    argv = ["fig1", "--config", str(config), "--points", "7", "--out", str(out)]
    assert main(argv) == 0
    assert len(read_table(out)) == 7


def test_config_file_unknown_key(tmp_path):
    config = tmp_path / "bad.env"
    config.write_text("meshes = 12\n", encoding="utf-8")
    assert main(["berry", "--config", str(config)]) == 2


def test_invalid_input_exit_codes(tmp_path):
    out = str(tmp_path / "x.csv")
    assert main(["berry", "--n", "-1", "--out", out]) == 2
    assert main(["fig1", "--points", "1", "--out", out]) == 2
    assert main(["sweep", "--variable", "xi", "--min", "1", "--max", "0", "--out", out]) == 2
    argv = ["raman-validate", "--preset", "none", "--omega0-khz", "100", "--g-khz", "0"]
    assert main([*argv, "--delta-khz", "300", "--out", out]) == 2


def test_unknown_choice_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "nonexistent"])
    assert excinfo.value.code == 2


def test_fast_loop_is_a_numerical_failure(tmp_path):
    argv = ["berry", "--method", "adiabatic", "--loop-time", "2", "--delta-over-lambda", "1"]
    assert main([*argv, "--out", str(tmp_path / "x.csv")]) == 3


def test_sweep_over_xi(capsys):
    argv = ["sweep", "--variable", "xi", "--min", "0", "--max", "pi", "--points", "5"]
    assert main([*argv, "--fix", "delta_over_lambda=0"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out), comment="#")
    assert list(frame.columns) == [
        "xi",
        "gamma_vacuum",
        "gamma_dissipative",
        "p2_ideal",
        "p2_dissipative",
    ]
    assert len(frame) == 5
    assert frame["gamma_vacuum"].to_numpy() == pytest.approx([math.pi] * 5)
    # gamma = pi flips the fringe: P2 = (1 + cos 2 xi) / 2
    assert frame["p2_ideal"].iloc[0] == pytest.approx(1.0)
    assert frame["p2_ideal"].iloc[2] == pytest.approx(0.0, abs=1e-12)


def test_verify_dissipative(tmp_path):
    out = tmp_path / "verify.csv"
    assert main(["verify", "dissipative", "--out", str(out)]) == 0
    frame = read_table(out)
    assert list(frame.columns) == [
        "name",
        "value",
        "reference",
        "tolerance",
        "passed",
        "informational",
    ]
    critical = frame[frame["informational"] == 0]
    assert (critical["passed"] == 1).all()
