"""Tests for workbench: configuration, report and command line."""

import os
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from conftest import ASSET_ROOT, ConfigFixture, ConfigTestFile, write_config

from workbench import (
    ConfigError,
    ConfigSyntaxError,
    ExperimentConfig,
    SuiteReport,
    list_checks,
    load_config,
    main,
)
from workbench.checks import CHECKS, Mode, Status
from workbench.suites import check_resolutions

ASSETS = ASSET_ROOT / "test_workbench"


def read_report(directory: Path) -> pd.DataFrame:
    """Read report.csv, skipping the seed line."""
    return pd.read_csv(directory / "report.csv", comment="#")


def test_entrypoint() -> None:
    """Test the entrypoint."""
    exit_status = os.system("vgwb --help")
    assert exit_status == 0


def test_config_samples(config_sample: ConfigTestFile) -> None:
    """Test that pass files load and fail files are rejected with a line number."""
    if config_sample.result:
        assert isinstance(load_config(config_sample.path), ExperimentConfig)
    else:
        with pytest.raises((ConfigError, ConfigSyntaxError), match=r"^line \d+: "):
            load_config(config_sample.path)


def test_config_defaults() -> None:
    """Test that an empty document gives the defaults."""
    config = load_config(ASSETS / "pass1.json")
    assert config == ExperimentConfig()
    assert config.algebra == "su2"
    assert config.extents == (8, 8, 8, 8)
    assert config.spacing == 0.25
    assert config.g == 1.0 and config.m == 1.0
    assert config.epsilon == 1e-3
    assert config.seed == 0
    assert config.suites == ("algebra", "convergence", "fields", "noether", "reduction")


def test_config_full_document() -> None:
    """Test that every configured value is carried over."""
    config = load_config(ASSETS / "pass2.json")
    assert config.algebra == "u1"
    assert config.lattice.extents == (4, 4, 4, 4)
    assert config.lattice.spacing == 0.5
    assert config.g == 0.5
    assert config.m == 0.0
    assert config.seed == 7
    assert config.suites == ("fields", "noether")
    assert config.output == Path("results")
    assert config.parameters.family == "constant"


def test_config_error_names_line_and_field() -> None:
    """Test the line number and the key in validation messages."""
    with pytest.raises(ConfigError, match=r"^line 3: field 'colour': unknown key") as info:
        load_config(ASSETS / "fail3.json")
    assert info.value.line == 3
    with pytest.raises(ConfigError, match="Extent of axis 0 is 3"):
        load_config(ASSETS / "fail1.json")


def test_config_syntax_error_line() -> None:
    """Test that a trailing comma is reported on the line of the closing brace."""
    with pytest.raises(ConfigSyntaxError) as info:
        load_config(ASSETS / "fail2.json")
    assert info.value.line == 3


def test_config_suites_are_ordered(tmp_path: Path) -> None:
    """Test that suites run in their canonical order whatever the listing."""
    fixture = write_config(tmp_path, {"suites": ["reduction", "algebra"]})
    assert load_config(fixture.path).suites == ("algebra", "reduction")


def test_config_overrides() -> None:
    """Test command-line overrides of the seed and the output directory."""
    config = ExperimentConfig().with_overrides(seed=42, output="elsewhere")
    assert config.seed == 42
    assert config.output == Path("elsewhere")
    assert ExperimentConfig().with_overrides() == ExperimentConfig()


def test_same_seed_same_closed_forms() -> None:
    """Test that building twice from one seed gives identical fields."""
    config = load_config(ASSETS / "pass2.json")
    first, second = config.build(), config.build()
    np.testing.assert_array_equal(first.gauge.values, second.gauge.values)
    np.testing.assert_array_equal(first.lam.values, second.lam.values)
    other = config.with_overrides(seed=8).build()
    assert not np.array_equal(first.gauge.values, other.gauge.values)


def test_reduction_config_is_in_regime() -> None:
    """Test that an identity affine velocity and a velocity-independent D build lambda = I."""
    cfg = load_config(ASSETS / "pass4.json").build()
    np.testing.assert_array_equal(cfg.lam.values[..., 0, 0, 0, 0], np.eye(4))
    assert cfg.gauge.constant_in_velocity


def test_registry() -> None:
    """Test the registry table and the log-only checks."""
    table = list_checks()
    assert list(table.columns) == ["check", "equation-tag", "suite", "mode", "threshold"]
    assert table["check"].is_unique
    assert CHECKS["local-invariance"].mode is Mode.LOG
    assert CHECKS["global-invariance"].accepts(2.0)
    assert not CHECKS["global-invariance"].accepts(1.0)
    assert not CHECKS["J2-conservation"].accepts(float("nan"))


def test_report_status() -> None:
    """Test that only asserted failures change the exit status."""
    report = SuiteReport(seed=1)
    report.add("condition-eq5", 1e3)
    report.add("J2-conservation", 1e-14)
    assert report.exit_status == 0
    assert [record.status for record in report] == [Status.LOG, Status.PASS]
    report.add("lambda-convergence", 1e-15, case="8/16", exact=True)
    report.skip("local-invariance")
    assert report.exit_status == 0
    assert report.summary().endswith("OK\n")
    report.add("mixing", 1e-3)
    assert report.exit_status == 1
    assert report.find("mixing")[0].failed
    assert report.summary().endswith("FAILED\n")
    assert len(report) == 5


def test_report_write(tmp_path: Path) -> None:
    """Test the seed line and the columns of report.csv."""
    report = SuiteReport(seed=99, command="verify-algebra")
    report.add("algebra-jacobi", 3e-17, case="su2")
    report.write(tmp_path)
    assert (tmp_path / "report.csv").read_text(encoding="utf8").startswith("# seed: 99\n")
    table = read_report(tmp_path)
    assert list(table.columns) == ["check", "case", "equation-tag", "value", "threshold", "status"]
    assert table.loc[0, "value"] == 3e-17
    assert table.loc[0, "status"] == "pass"
    summary = (tmp_path / "summary.txt").read_text(encoding="utf8")
    assert summary.startswith("vgwb verify-algebra: seed 99\n")


def test_check_resolutions() -> None:
    """Test that resolutions must double and number at least two."""
    assert check_resolutions([8, 16, 32]) == (8, 16, 32)
    with pytest.raises(ConfigError, match="resolutions"):
        check_resolutions([8])
    with pytest.raises(ConfigError, match="resolutions"):
        check_resolutions([8, 12])


def test_list_checks_cli(capsys: pytest.CaptureFixture[str]) -> None:
    """Test that the registry is printed."""
    assert main(["--list-checks"]) == 0
    output = capsys.readouterr().out
    assert "akt-J2" in output
    assert "log" in output


def test_no_command(capsys: pytest.CaptureFixture[str]) -> None:
    """Test that a missing subcommand is a usage error."""
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_verify_algebra_su3(tmp_path: Path) -> None:
    """Test the Jacobi table of su3 and the report."""
    out = tmp_path / "su3"
    assert main(["verify-algebra", str(ASSETS / "pass3.json"), "--out", str(out)]) == 0
    table = pd.read_csv(out / "jacobi.csv")
    assert list(table.columns) == ["alpha", "beta", "gamma", "residual"]
    assert len(table) == 512
    assert table["residual"].abs().max() <= 1e-12
    report = read_report(out)
    assert set(report["check"]) == {"algebra-closure", "algebra-jacobi", "algebra-antisymmetry"}


def test_verify_algebra_default(tmp_path: Path) -> None:
    """Test that the configuration file is optional."""
    assert main(["verify-algebra", "--out", str(tmp_path)]) == 0
    assert len(pd.read_csv(tmp_path / "jacobi.csv")) == 27


def test_invalid_extent_cli(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test that an extent below four exits with status 2 and names the constraint."""
    assert main(["run", str(ASSETS / "fail1.json"), "--out", str(tmp_path)]) == 2
    error = capsys.readouterr().err
    assert "extent" in error.lower()
    assert ">= 4" in error


def test_missing_config(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test that an unreadable configuration exits with status 2."""
    assert main(["run", str(tmp_path / "absent.json")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_convergence_cli(tmp_path: Path) -> None:
    """Test error ratios near four between 8^4 and 16^4."""
    fixture = write_config(tmp_path, {"suites": ["convergence"]})
    assert main(["convergence", str(fixture.path), "--resolutions", "8,16"]) == 0
    table = pd.read_csv(fixture.out / "convergence.csv")
    assert list(table.columns) == ["check", "resolution", "h", "error", "ratio"]
    assert len(table) == 4
    ratios = table["ratio"].dropna()
    assert len(ratios) == 2
    assert ((ratios >= 3.6) & (ratios <= 4.4)).all()
    report = read_report(fixture.out)
    assert set(report["case"]) == {"8/16"}


@pytest.mark.parametrize("resolutions", ["8", "8,12"])
def test_convergence_bad_resolutions(resolutions: str, tmp_path: Path) -> None:
    """Test that a single or non-doubling resolution list exits with status 2."""
    fixture = write_config(tmp_path, {})
    assert main(["convergence", str(fixture.path), "--resolutions", resolutions]) == 2


def test_reduce_akt_cli(tmp_path: Path) -> None:
    """Test the reduction command on a configuration inside the regime and the field dump."""
    out = tmp_path / "akt"
    assert main(["reduce-akt", str(ASSETS / "pass4.json"), "--out", str(out), "--dump-fields"]) == 0
    report = read_report(out)
    assert list(report["check"]) == ["akt-J1", "akt-J2"]
    assert (report["status"] == "pass").all()
    for name in ("phi", "D", "lambda", "F2", "J2"):
        assert (out / "fields" / f"{name}.csv").exists()


def test_reduce_akt_outside_regime(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test that a velocity-dependent configuration exits with status 2."""
    fixture = write_config(tmp_path, {"lattice": {"extents": [4, 4, 4, 4], "spacing": 0.5}})
    assert main(["reduce-akt", str(fixture.path)]) == 2
    assert "reduction regime" in capsys.readouterr().err


def test_run_small(small_config: ConfigFixture) -> None:
    """Test that a full run on a small lattice passes and records the asserted checks."""
    assert main(["run", str(small_config.path)]) == 0
    report = read_report(small_config.out)
    checks = set(report["check"])
    for name in ("J2-conservation", "F2-antisymmetry", "mixing", "oracle-matter", "akt-J1", "eq25-plane-wave"):
        assert name in checks
    assert not (report["status"] == "fail").any()
    assert set(report.loc[report["check"].str.startswith("condition-"), "status"]) == {"log-only"}


def test_run_is_reproducible(tmp_path: Path) -> None:
    """Test that the same seed writes a bit-identical report."""
    content = {"lattice": {"extents": [4, 4, 4, 4], "spacing": 0.5}, "suites": ["fields"], "seed": 5}
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    first = write_config(tmp_path / "a", content)
    second = write_config(tmp_path / "b", content)
    assert main(["run", str(first.path)]) == main(["run", str(second.path)])
    assert (first.out / "report.csv").read_bytes() == (second.out / "report.csv").read_bytes()


def test_seed_override(tmp_path: Path) -> None:
    """Test that --seed replaces the configured seed in the report."""
    fixture = write_config(tmp_path, {"suites": ["algebra"]})
    assert main(["run", str(fixture.path), "--seed", "123"]) == 0
    assert (fixture.out / "report.csv").read_text(encoding="utf8").startswith("# seed: 123\n")


def test_run_with_purely_local_parameters(tmp_path: Path) -> None:
    """Test that parameters without a constant part record the global check as exact."""
    fixture = write_config(
        tmp_path,
        {
            "lattice": {"extents": [4, 4, 4, 4]},
            "parameters": {"family": "linear", "offset": [0, 0, 0]},
            "suites": ["fields"],
        },
    )
    assert main(["run", str(fixture.path)]) == 0
    report = read_report(fixture.out)
    rows = report[(report["check"] == "global-invariance") & (report["case"] == "su2")]
    assert list(rows["status"]) == ["exact"]
    local = report[report["check"] == "local-invariance"]
    assert list(local["status"]) == ["log-only"]
    assert 3.6 <= local["value"].iloc[0] <= 4.4


def test_convergence_needs_equal_extents(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test that non-cubic extents are rejected for the convergence suite only."""
    with pytest.raises(ConfigError, match="equal extents") as info:
        load_config(ASSETS / "fail15.json")
    assert info.value.line == 2
    content = {"lattice": {"extents": [8, 8, 8, 4]}, "suites": ["fields"]}
    fixture = write_config(tmp_path, content)
    assert load_config(fixture.path).extents == (8, 8, 8, 4)
    assert main(["convergence", str(fixture.path)]) == 2
    assert "equal extents" in capsys.readouterr().err
