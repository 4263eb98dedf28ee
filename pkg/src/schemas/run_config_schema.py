"""Load an INI run configuration through the section schemas"""

import configparser  # Run configs are INI files
from pathlib import Path
from marshmallow import ValidationError
from models import RunConfig
from schemas.sections_schema import section_schemas
from utils.error_handling import ConfigError

# Keys holding file paths, per section; resolved against the config file's directory
PATH_KEYS = {"model": ("fixture",), "truth": ("fixture",), "costfit": ("samples",)}


def load_run_config(path: str | Path) -> RunConfig:
    """
    Parse the file, validate every section, resolve relative paths and check that the files
    they name exist. Validation errors come back keyed by section, then by field.
    """

    path = Path(path).resolve()
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path)
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from e
    if parser.defaults():
        raise ConfigError(f"{path}: a [DEFAULT] section is not supported")

    unknown = [name for name in parser.sections() if name not in section_schemas]
    if unknown:
        raise ConfigError(
            f"{path}: unknown section(s) {', '.join(unknown)}; "
            f"expected any of {', '.join(section_schemas)}"
        )

    sections, errors = {}, {}
    for name in parser.sections():
        try:
            sections[name] = section_schemas[name].load(dict(parser[name]))
        except ValidationError as e:
            errors[name] = e.messages
    if errors:
        raise ValidationError(errors)

    for name, keys in PATH_KEYS.items():
        for key in keys:
            if sections.get(name, {}).get(key) is not None:
                sections[name][key] = _resolve(path, sections[name][key], f"[{name}] {key}")
    return RunConfig(path=path, sections=sections)


def _resolve(config_path: Path, value: str, label: str) -> Path:
    """Path relative to the config file, which must exist"""

    resolved = Path(value)
    if not resolved.is_absolute():
        resolved = (config_path.parent / resolved).resolve()
    if not resolved.is_file():
        raise ConfigError(f"{label}: file not found: {resolved}")
    return resolved
