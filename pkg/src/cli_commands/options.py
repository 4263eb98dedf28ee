"""Options every command takes and the helpers that turn loaded config sections into domain
objects"""

from pathlib import Path
from typing import Any, Callable  # Used for type hints
import click
from controllers.plant_controllers import load_fixture, load_truth
from models import (
    DiscreteModel,
    OcpConfig,
    RunConfig,
    SimMode,
    SolveSettings,
    TruthModel,
    WaveSpec,
)
from schemas import section_schemas
from utils.error_handling import ConfigError


def run_options(func: Callable) -> Callable:
    """Add --config and --out. Paths are checked by the loader so a missing file exits 1."""

    func = click.option(
        "--out",
        "out_dir",
        type=click.Path(file_okay=False),
        default=None,
        help="Output directory; overrides [run] output_dir.",
    )(func)
    return click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False),
        required=True,
        help="INI run configuration.",
    )(func)


def output_dir(run_config: RunConfig, out_dir: str | None, profile: Any) -> Path:
    """--out, else [run] output_dir relative to the config file, else the profile default"""

    if out_dir is not None:
        path = Path(out_dir)
    else:
        configured = (run_config.optional("run") or {}).get("output_dir")
        if configured is not None:
            path = Path(configured)
            if not path.is_absolute():
                path = run_config.path.parent / path
        else:
            path = Path(profile.OUTPUT_DIR)
    path.mkdir(parents=True, exist_ok=True)
    return path


def seed_of(run_config: RunConfig, profile: Any) -> int:
    configured = (run_config.optional("run") or {}).get("seed")
    return profile.SEED if configured is None else configured


def workers_of(run_config: RunConfig, profile: Any) -> int:
    configured = (run_config.optional("run") or {}).get("workers")
    return profile.WORKERS if configured is None else configured


def wave_of(run_config: RunConfig, required: bool = False) -> WaveSpec | None:
    """[wave] as a WaveSpec; a missing section is a calm sea unless the command needs a wave"""

    section = run_config.optional("wave")
    if section is None:
        if required:
            raise ConfigError(f"{run_config.path}: section [wave] is required for this command")
        return None
    return WaveSpec(**section)


def model_of(run_config: RunConfig) -> DiscreteModel:
    return load_fixture(run_config.section("model")["fixture"])


def truth_of(run_config: RunConfig) -> tuple[TruthModel, SimMode]:
    """[truth] from its own fixture, or derived from the [model] fixture"""

    section = run_config.section("truth")
    if section["from_model"]:
        truth = TruthModel.from_discrete(model_of(run_config))
    else:
        truth = load_truth(section["fixture"])
    return truth, section["mode"]


def ocp_of(run_config: RunConfig, n_steps: int, **changes) -> OcpConfig:
    """[ocp] with the horizon length filled in; a missing section takes the defaults"""

    section = dict(run_config.optional("ocp") or section_schemas["ocp"].load({}))
    section.update(changes)
    return OcpConfig(n_steps=n_steps, **section)


def settings_of(run_config: RunConfig, seed: int) -> SolveSettings:
    section = run_config.optional("solver") or {}
    return SolveSettings(seed=seed, **section)
