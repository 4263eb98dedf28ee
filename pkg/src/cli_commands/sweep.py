from itertools import product  # Sensitivity rows cover every lambda1 x lambda2 pair
import click
from controllers.sweep_controllers import (
    GRID_COLUMNS,
    LAMBDA_COLUMNS,
    SENSITIVITY_COLUMNS,
    grid_row,
    lambda_row,
    select_lambda,
    sensitivity_row,
    solve_job,
)
from extensions import map_rows
from models import SolveStatus, SweepJob
from models.mpc_model import steps_in
from schemas import load_run_config, solve_report_schema, sweep_summary_schema
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
    wave_of,
    workers_of,
)

DEFAULT_PERIODS = {"lambda1": 7, "lambda2": 7, "eta_rho": 1, "sensitivity": 7}  # Horizon, in wave periods


@click.command("sweep")
@run_options
@click.pass_obj
@handle_errors
def sweep_parameters(profile, config_path: str, out_dir: str | None):
    """Solve one instance per grid point and tabulate the results."""

    run_config = load_run_config(config_path)
    section = run_config.section("sweep")
    mode = section["mode"]
    wave = wave_of(run_config, required=True)
    model = model_of(run_config)
    settings = settings_of(run_config, seed_of(run_config, profile))
    workers = workers_of(run_config, profile)
    out = output_dir(run_config, out_dir, profile)

    horizon = (section["horizon_periods"] or DEFAULT_PERIODS[mode]) * wave.period
    n_steps = steps_in(horizon, model.dt, "sweep horizon")

    def job(**changes) -> SweepJob:
        return SweepJob(ocp_of(run_config, n_steps, **changes), model, wave, settings)

    selected, reference_report = None, None
    if mode in ("lambda1", "lambda2"):
        other = "lambda2" if mode == "lambda1" else "lambda1"
        jobs = [job(**{mode: value, other: 0.0}) for value in section[mode]]
        click.echo(f"Solving {len(jobs)} {mode} instances over {horizon:g} s with {workers} worker(s)...")
        rows = map_rows(lambda_row, jobs, workers)
        write_csv(out / "lambda_sweep.csv", LAMBDA_COLUMNS, _table(rows, LAMBDA_COLUMNS))
        selected = select_lambda(rows, mode, wave.period, section["tolerance"])

    elif mode == "eta_rho":
        jobs = [job(eta=eta, rho=rho) for eta, rho in product(section["eta"], section["rho"])]
        click.echo(f"Solving {len(jobs)} eta x rho instances over {horizon:g} s with {workers} worker(s)...")
        rows = map_rows(grid_row, jobs, workers)
        write_csv(out / "safety_grid.csv", GRID_COLUMNS, _table(rows, GRID_COLUMNS))

    else:
        reference = job(lambda1=section["reference_lambda1"], lambda2=section["reference_lambda2"])
        base = solve_job(reference)
        if not base.report.status.usable:
            raise PartialFailure(f"reference solve failed with status {base.report.status.value}")
        reference_report = solve_report_schema.dump(base.report)
        jobs = [
            SweepJob(
                ocp_of(run_config, n_steps, lambda1=l1, lambda2=l2),
                model,
                wave,
                settings,
                reference=reference.ocp,
                reference_objective=base.report.objective,
            )
            for l1, l2 in product(section["lambda1"], section["lambda2"])
        ]
        click.echo(f"Solving {len(jobs)} sensitivity instances over {horizon:g} s...")
        rows = map_rows(sensitivity_row, jobs, workers)
        write_csv(out / "lambda_sensitivity.csv", SENSITIVITY_COLUMNS, _table(rows, SENSITIVITY_COLUMNS))

    failed = [row for row in rows if not SolveStatus(row["status"]).usable]
    summary = {
        "mode": mode,
        "rows": len(rows),
        "failed_rows": len(failed),
        "wave_period": wave.period,
        "horizon": horizon,
        "selected": selected,
        "reference": reference_report,
    }
    write_json(out / "sweep_summary.json", sweep_summary_schema.dump(summary))

    if selected is not None:
        click.echo(f"Selected {mode} = {selected[mode]:g}")
    if failed:
        raise PartialFailure(f"{len(failed)} of {len(rows)} rows failed; see the status column")
    click.echo(f"Sweep written to {out}")


def _table(rows: list[dict], columns: tuple[str, ...]) -> list[list]:
    return [[row[name] for name in columns] for row in rows]
