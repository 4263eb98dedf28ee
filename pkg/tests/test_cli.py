"""Test cases for the commands, invoked in process through the click test runner."""

import json
from pathlib import Path  # Used for type hints
from typing import Callable  # Used for type hints
import click  # Used for type hints
from click.testing import CliRunner, Result  # Used for type hints
import pytest  # Required for @parametrize decorator
from conftest import DATA_DIR
from config import ROOT_DIR
from controllers.costmodel_controllers import load_samples
from utils.file_io import read_key_values

FIXTURE = DATA_DIR / "wec_h6_t4.kv"

# Half-second wave so a one-period horizon is only 50 steps
SHORT_SWEEP = f"""
[model]
fixture = {FIXTURE}

[wave]
height = 6
period = 0.5

[ocp]
lambda1 = 1e-6
"""


def error_of(result: Result) -> dict:
    """Json error payload the failing command echoed to stderr"""

    return json.loads(result.stderr.strip().splitlines()[-1])


def csv_lines(path: Path) -> list[str]:
    return path.read_text().strip().splitlines()


# Test identification and the fixture writer
# ==================================================================================================


def test_estimate(app: click.Group, runner: CliRunner, tmp_path: Path) -> None:
    """Test the shipped identification config recovers the reference map and writes its outputs."""

    config = ROOT_DIR / "configs" / "estimate.ini"

    result = runner.invoke(app, ["estimate", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "identification_report.json").read_text())
    assert report["max_relative_error"] < 1e-5
    assert report["best_shift"] == pytest.approx(0.5)
    assert set(report["coefficients"]) == set(report["reference"])
    for name in ("fitted_model.kv", "decay.csv", "float.csv", "control.csv"):
        assert (tmp_path / name).is_file()
    fitted = read_key_values(tmp_path / "fitted_model.kv")
    assert fitted["a11"] == pytest.approx(0.9939, rel=1e-5)


def test_fixtures_match_shipped_data(app: click.Group, runner: CliRunner, tmp_path: Path) -> None:
    """Test that regenerating the fixtures reproduces the files in data/."""

    result = runner.invoke(app, ["--log-level", "error", "fixtures", "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    for name in ("wec_h6_t4.kv", "wec_h6_t5.kv", "wec_h6_t6.kv", "truth_h6_t4.kv"):
        assert read_key_values(tmp_path / name) == pytest.approx(read_key_values(DATA_DIR / name))
    written = load_samples(tmp_path / "damping_synthetic.csv")
    shipped = load_samples(DATA_DIR / "damping_synthetic.csv")
    assert [s.damping for s in written] == [s.damping for s in shipped]
    assert [s.mean_sq_velocity for s in written] == pytest.approx(
        [s.mean_sq_velocity for s in shipped], rel=1e-12
    )


# Test the cost model command
# ==================================================================================================


def test_costfit(app: click.Group, runner: CliRunner, write_config: Callable[..., Path]) -> None:
    """Test the fit report, written to the [run] output_dir relative to the config file."""

    config = write_config(
        f"[costfit]\nsamples = {DATA_DIR / 'damping_synthetic.csv'}\n\n[run]\noutput_dir = out\n"
    )

    result = runner.invoke(app, ["costfit", "--config", str(config)])

    assert result.exit_code == 0, result.output
    report = json.loads((config.parent / "out" / "fit_report.json").read_text())
    assert report["winner"] == "Hyperbolic"
    assert report["samples"] == 40
    assert [fit["family"] for fit in report["fits"]][0] == "Hyperbolic"
    assert report["power_force_exponent"] == pytest.approx(2.0, abs=0.05)
    assert all(report["properties"].values())
    assert "Best family: Hyperbolic" in result.output


def test_costfit_empty_csv(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test that an empty samples file exits 1 with the line it failed on."""

    (tmp_path / "empty.csv").write_text("")
    config = write_config("[costfit]\nsamples = empty.csv\n")

    result = runner.invoke(app, ["costfit", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 1
    error = error_of(result)
    assert error["error"] == "Malformed CSV"
    assert error["line"] == 1
    assert "empty" in error["message"]


# Test configuration failures
# ==================================================================================================


@pytest.mark.parametrize("command", ["estimate", "sweep", "mpc", "costfit"])
def test_missing_config_exits_1(
    app: click.Group, runner: CliRunner, tmp_path: Path, command: str
) -> None:
    """Test every configured command exits 1 when the config file does not exist."""

    result = runner.invoke(app, [command, "--config", str(tmp_path / "absent.ini")])

    assert result.exit_code == 1
    assert error_of(result)["error"] == "Config Error"


def test_missing_fixture_exits_1(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path]
) -> None:
    """Test that a model fixture path that does not exist exits 1."""

    config = write_config("[model]\nfixture = nowhere.kv\n\n[mpc]\nperiods = 1\n")

    result = runner.invoke(app, ["mpc", "--config", str(config)])

    assert result.exit_code == 1
    assert "file not found" in error_of(result)["message"]


def test_invalid_section_exits_1(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path]
) -> None:
    """Test that schema errors are echoed keyed by section."""

    config = write_config(SHORT_SWEEP + "\n[sweep]\nmode = lambda1\n")

    result = runner.invoke(app, ["sweep", "--config", str(config)])

    assert result.exit_code == 1
    assert error_of(result)["error"] == "Config Validation Failed"
    assert "lambda1" in error_of(result)["messages"]["sweep"]


def test_sweep_needs_a_wave(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test that a sweep without a [wave] section exits 1."""

    config = write_config(f"[model]\nfixture = {FIXTURE}\n\n[sweep]\nmode = lambda1\nlambda1 = 1e-6\n")

    result = runner.invoke(app, ["sweep", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 1
    assert "[wave]" in error_of(result)["message"]


# Test sweeps and receding-horizon runs on short horizons
# ==================================================================================================


def test_sweep_eta_rho(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test a two-point safety grid over one wave period."""

    config = write_config(SHORT_SWEEP + "\n[sweep]\nmode = eta_rho\neta = 0.5, 1\nrho = 0.1\nhorizon_periods = 1\n")
    out = tmp_path / "grid"

    result = runner.invoke(app, ["sweep", "--config", str(config), "--out", str(out)])

    assert result.exit_code == 0, result.output
    lines = csv_lines(out / "safety_grid.csv")
    assert lines[0] == "eta,rho,objective,solve_seconds,iterations,status"
    assert len(lines) == 3
    assert all(line.endswith(",Optimal") for line in lines[1:])
    summary = json.loads((out / "sweep_summary.json").read_text())
    assert summary["rows"] == 2 and summary["failed_rows"] == 0
    assert summary["horizon"] == pytest.approx(0.5)
    assert summary["selected"] is None
    assert summary["reference"] is None


def test_sweep_lambda1(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test a lambda sweep writes one row per grid value in ascending input order."""

    config = write_config(SHORT_SWEEP + "\n[sweep]\nmode = lambda1\nlambda1 = 1e-6, 1e-5\nhorizon_periods = 2\n")

    result = runner.invoke(app, ["sweep", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    lines = csv_lines(tmp_path / "lambda_sweep.csv")
    assert lines[0] == "lambda1,lambda2,avg_velocity_period,objective,energy,status"
    assert [line.split(",")[0] for line in lines[1:]] == ["1e-06", "1e-05"]


def test_sweep_sensitivity(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test that the reference coefficients score a ratio of one against themselves."""

    config = write_config(
        SHORT_SWEEP
        + "\n[sweep]\nmode = sensitivity\nlambda1 = 1e-6\nlambda2 = 1e-6\nhorizon_periods = 1\n"
    )

    result = runner.invoke(app, ["sweep", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    lines = csv_lines(tmp_path / "lambda_sensitivity.csv")
    assert len(lines) == 2
    assert float(lines[1].split(",")[2]) == pytest.approx(1.0, rel=1e-6)
    reference = json.loads((tmp_path / "sweep_summary.json").read_text())["reference"]
    assert reference["status"] == "Optimal"
    assert reference["starts"] == 1
    assert reference["kkt_residual"] <= 1e-5


def test_mpc(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test a two-period receding-horizon run against the model plant."""

    config = write_config(
        f"[model]\nfixture = {FIXTURE}\n\n[wave]\nheight = 6\nperiod = 4\n\n"
        "[ocp]\nlambda1 = 1e-6\n\n[mpc]\nhorizon = 0.5\nupdate_horizon = 0.1\nperiods = 2\n"
    )

    result = runner.invoke(app, ["mpc", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    log = csv_lines(tmp_path / "receding_log.csv")
    assert log[0] == "period,objective,energy,solve_seconds,max_alpha,realtime_ok,status"
    assert [line.split(",")[0] for line in log[1:]] == ["0", "1"]
    assert len(csv_lines(tmp_path / "applied_trajectory.csv")) == 1 + 2 * 10 + 1
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["periods_completed"] == 2
    assert summary["failed"] is False
    assert summary["failure"] is None
    assert summary["max_alpha"] == 0.0
    assert [solve["status"] for solve in summary["solves"]] == ["Optimal", "Optimal"]
    assert all(solve["iterations"] >= 1 for solve in summary["solves"])


# Test that unconverged solves are reported as partial failures
# ==================================================================================================


def test_sweep_iteration_limit_exits_2(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test a grid row stopped by the iteration limit is written but fails the sweep."""

    config = write_config(
        SHORT_SWEEP
        + "\n[sweep]\nmode = eta_rho\neta = 1\nrho = 0.1\nhorizon_periods = 1\n"
        + "\n[solver]\nmax_iter = 1\n"
    )

    result = runner.invoke(app, ["sweep", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 2
    assert error_of(result)["error"] == "Partial Failure"
    lines = csv_lines(tmp_path / "safety_grid.csv")
    assert len(lines) == 2
    assert not lines[1].endswith(",Optimal")
    summary = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert summary["rows"] == 1 and summary["failed_rows"] == 1


def test_mpc_iteration_limit_exits_2(
    app: click.Group, runner: CliRunner, write_config: Callable[..., Path], tmp_path: Path
) -> None:
    """Test that a first period stopped by the iteration limit ends the run before anything is applied."""

    config = write_config(
        f"[model]\nfixture = {FIXTURE}\n\n[wave]\nheight = 6\nperiod = 4\n\n"
        "[ocp]\nlambda1 = 1e-6\n\n[mpc]\nhorizon = 0.5\nupdate_horizon = 0.1\nperiods = 2\n\n"
        "[solver]\nmax_iter = 1\n"
    )

    result = runner.invoke(app, ["mpc", "--config", str(config), "--out", str(tmp_path)])

    assert result.exit_code == 2
    assert "period 0" in error_of(result)["message"]
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["failed"] is True
    assert summary["periods_completed"] == 0
    assert summary["failure"]["period"] == 0
    assert summary["failure"]["status"] != "Optimal"
    assert len(summary["solves"]) == 1
    assert not (tmp_path / "applied_trajectory.csv").exists()
