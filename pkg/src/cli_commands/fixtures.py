from pathlib import Path
import click
from controllers.costmodel_controllers import save_samples, synthetic_samples
from controllers.plant_controllers import save_fixture, save_truth
from models import DiscreteModel, TruthModel
from utils import handle_errors

DT = 0.01
DRIFT = [[0.9939, -0.0378], [0.00997, 0.9998]]  # Shared by all three waves

# (period, b, c) of the identified discrete models for 6 m waves
IDENTIFIED_WAVES = [
    (4, [1.23e-08, 6.1785e-11], [0.0045, 2.248e-05]),
    (5, [3.25e-08, 1.6256e-10], [0.0142, 7.0887e-05]),
    (6, [4.29e-08, 2.1485e-10], [0.0204, 0.00010219]),
]

# Continuous truth whose forward-Euler map at DT is the 4 s model, rounded as published
TRUTH_H6_T4 = {
    "a11": -0.61,
    "a12": -3.78,
    "a21": 0.997,
    "a22": -0.02,
    "b1": 1.23e-06,
    "b2": 6.1785e-09,
    "c1": 0.45,
    "c2": 0.002248,
    "k_es": 1000.0,
    "z_es": 3.0,
}
TRUTH_HEADER = (
    "Continuous truth whose forward-Euler map at dt = 0.01 s is wec_h6_t4\n"
    "End-stop: restoring coefficient k_es (1/s^2) beyond stroke z_es (m)"
)


@click.command("fixtures")
@click.option(
    "--out", "out_dir", type=click.Path(file_okay=False), default=None, help="Defaults to the fixture directory."
)
@click.pass_obj
@handle_errors
def write_fixtures(profile, out_dir: str | None):
    """Write the shipped coefficient fixtures and the synthetic damping dataset."""

    out = Path(out_dir or profile.FIXTURE_DIR)
    click.echo(f"Writing fixtures to {out}...")

    for period, b, c in IDENTIFIED_WAVES:
        model = DiscreteModel(A=DRIFT, b=b, c=c, dt=DT)
        save_fixture(
            model,
            out / f"wec_h6_t{period}.kv",
            header=f"Discrete coefficients identified for a 6 m, {period} s regular wave",
        )
    save_truth(TruthModel.from_coefficients(TRUTH_H6_T4), out / "truth_h6_t4.kv", TRUTH_HEADER)
    save_samples(synthetic_samples(), out / "damping_synthetic.csv")

    click.echo("Fixtures written.")
