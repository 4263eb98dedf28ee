import click
import numpy as np
from controllers.plant_controllers import (
    exact_one_step,
    save_fixture,
    sinusoidal_control,
    trajectory_to_csv,
    truth_rollout,
)
from controllers.sysid_controllers import identify
from models import ControlDataset, DecayDataset, FloatDataset, SimMode, State
from schemas import identification_report_schema, load_run_config
from utils import handle_errors
from utils.file_io import write_json
from cli_commands.options import output_dir, run_options, truth_of, wave_of


@click.command("estimate")
@run_options
@click.pass_obj
@handle_errors
def estimate_model(profile, config_path: str, out_dir: str | None):
    """Identify a discrete model from free-decay, free-floating and forced runs of the truth plant."""

    run_config = load_run_config(config_path)
    section = run_config.section("estimate")
    truth, mode = truth_of(run_config)
    wave = wave_of(run_config, required=True)
    out = output_dir(run_config, out_dir, profile)
    dt = section["dt"]

    click.echo(f"Running identification experiments on the {mode.value} truth plant...")
    initial = State(section["decay_velocity"], section["decay_position"])
    decay = truth_rollout(truth, mode, initial, None, None, section["decay_seconds"], dt)
    floating = truth_rollout(truth, mode, State(0.0, 0.0), None, wave, section["float_seconds"], dt)

    amplitude = section["control_amplitude"]
    period = section["control_period"] or wave.period
    control = sinusoidal_control(amplitude, period, section["control_shift"])
    forced = truth_rollout(
        truth, mode, State(0.0, 0.0), control, wave, section["control_seconds"], dt
    )

    report = identify(
        DecayDataset((decay,)),
        FloatDataset((floating,)),
        ControlDataset((forced,), amplitude, period),
    )

    # The map the fit should reproduce: Euler for the discrete plant, exact ZOH for RK4
    reference = truth.euler_model(dt) if mode is SimMode.DISCRETE_EXACT else exact_one_step(truth, dt)
    fitted = report.model.to_coefficients()
    expected = reference.to_coefficients()
    relative = {
        key: abs(fitted[key] - expected[key]) / abs(expected[key])
        for key in expected
        if key != "dt" and expected[key] != 0
    }

    fixture = save_fixture(
        report.model,
        out / section["fixture_name"],
        header=f"Fitted by least squares from {mode.value} truth runs at dt = {dt} s",
    )
    trajectory_to_csv(decay, out / "decay.csv")
    trajectory_to_csv(floating, out / "float.csv")
    trajectory_to_csv(forced, out / "control.csv")

    payload = identification_report_schema.dump(report)
    payload["reference"] = expected
    payload["relative_error"] = relative
    payload["max_relative_error"] = float(np.max(list(relative.values())))
    write_json(out / "identification_report.json", payload)

    click.echo(f"Fitted model written to {fixture}")
    click.echo(f"Largest relative coefficient error: {payload['max_relative_error']:.3e}")
