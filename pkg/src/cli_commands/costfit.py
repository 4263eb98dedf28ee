import click
import numpy as np
from controllers.costmodel_controllers import (
    captured_power_exponent,
    fit_families,
    hyperbolic_properties,
    load_samples,
    power_force_exponent,
)
from models import FitFamily
from schemas import fit_report_schema, load_run_config
from utils import handle_errors
from utils.file_io import write_json
from cli_commands.options import output_dir, run_options


@click.command("costfit")
@run_options
@click.pass_obj
@handle_errors
def fit_cost_model(profile, config_path: str, out_dir: str | None):
    """Fit damping against mean squared velocity and check the power-force exponent."""

    run_config = load_run_config(config_path)
    section = run_config.section("costfit")
    out = output_dir(run_config, out_dir, profile)

    samples = load_samples(section["samples"])
    fits = fit_families(samples)
    winner = fits[0]
    b_range = (section["b_lo"], section["b_hi"])

    exponent = captured = None
    properties = {}
    if winner.family is FitFamily.HYPERBOLIC:
        exponent = power_force_exponent(winner, b_range, section["points"])
        captured = captured_power_exponent(winner, b_range, section["points"])
        grid = np.geomspace(b_range[0], b_range[1], section["points"])
        properties = hyperbolic_properties(winner, grid)

    report = {
        "samples": len(samples),
        "winner": winner.family.value,
        "fits": fits,
        "b_range": list(b_range),
        "power_force_exponent": exponent,
        "captured_power_exponent": captured,
        "properties": properties,
    }
    path = write_json(out / "fit_report.json", fit_report_schema.dump(report))

    click.echo(f"Best family: {winner.family.value} (R² = {winner.r_squared:.6f})")
    if exponent is not None:
        click.echo(f"Power-force exponent over [{b_range[0]:g}, {b_range[1]:g}]: {exponent:.3f}")
    click.echo(f"Report written to {path}")
