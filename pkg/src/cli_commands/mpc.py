import click
from controllers.mpc_controllers import run
from controllers.plant_controllers import trajectory_to_csv
from models import MpcConfig, SimMode
from models.mpc_model import steps_in
from schemas import load_run_config, run_summary_schema
from utils import handle_errors
from utils.error_handling import PartialFailure
from utils.file_io import write_csv, write_json
from cli_commands.options import (
    model_of,
    ocp_of,
    output_dir,
    run_options,
    seed_of,
    settings_of,
    truth_of,
    wave_of,
)

LOG_COLUMNS = ("period", "objective", "energy", "solve_seconds", "max_alpha", "realtime_ok", "status")


@click.command("mpc")
@run_options
@click.pass_obj
@handle_errors
def receding_horizon(profile, config_path: str, out_dir: str | None):
    """Run the receding-horizon controller against the configured plant."""

    run_config = load_run_config(config_path)
    section = run_config.section("mpc")
    model = model_of(run_config)
    out = output_dir(run_config, out_dir, profile)

    truth, mode = None, SimMode.DISCRETE_EXACT
    if section["plant"] == "truth":
        truth, mode = truth_of(run_config)

    n_steps = steps_in(section["horizon"], model.dt, "horizon")
    config = MpcConfig(
        t0=section["t0"],
        horizon=section["horizon"],
        update_horizon=section["update_horizon"],
        dt=model.dt,
        periods=section["periods"],
        ocp=ocp_of(run_config, n_steps, dt=model.dt),
        model=model,
        wave=wave_of(run_config),
        plant_mode=mode,
        truth=truth,
    )
    settings = settings_of(run_config, seed_of(run_config, profile))

    click.echo(
        f"Running {config.periods} periods: horizon {config.horizon:g} s, "
        f"update every {config.update_horizon:g} s..."
    )
    log = run(config, settings)

    rows = [
        (
            record.period,
            record.objective,
            record.energy,
            record.report.solve_seconds,
            record.max_alpha,
            record.realtime_ok,
            record.status.value,
        )
        for record in log.records
    ]
    write_csv(out / "receding_log.csv", LOG_COLUMNS, rows)
    if log.applied is not None:
        trajectory_to_csv(log.applied, out / "applied_trajectory.csv")
    summary = run_summary_schema.dump(log)
    write_json(out / "run_summary.json", summary)

    click.echo(
        f"Total objective {summary['total_objective']:.6e} J, "
        f"real-time in {100 * summary['realtime_fraction']:.0f}% of periods"
    )
    if log.failed:
        failure = summary["failure"]
        raise PartialFailure(
            f"run stopped at period {failure['period']} with status {failure['status']}"
        )
