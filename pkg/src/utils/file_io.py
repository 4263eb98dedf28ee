"""Readers and writers for the plain-text formats the toolkit exchanges: key-value fixtures,
CSV tables and JSON reports."""

import csv  # Tables are plain CSV with a header row
import json  # Reports are json documents
from pathlib import Path  # Used for path handling
from typing import Any, Iterable, Sequence  # Used for type hints
from utils.error_handling import ConfigError, CsvFormatError


def read_key_values(path: str | Path) -> dict[str, float]:
    """
    Read a `name = value` fixture file, one coefficient per line. Blank lines and lines
    starting with '#' are skipped. Raises ConfigError naming the path and line on any
    problem.
    """

    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"fixture file not found: {path}")

    values: dict[str, float] = {}
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected 'name = value'")
        name, _, text = line.partition("=")
        name = name.strip()
        if name in values:
            raise ConfigError(f"{path}:{line_no}: duplicate key '{name}'")
        try:
            values[name] = float(text.strip())
        except ValueError as e:
            raise ConfigError(f"{path}:{line_no}: '{text.strip()}' is not a number") from e
    return values


def write_key_values(path: str | Path, values: dict[str, float], header: str = "") -> Path:
    """Write a fixture file; repr keeps every float exactly round-trippable"""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {row}" for row in header.splitlines()] if header else []
    lines += [f"{name} = {float(value)!r}" for name, value in values.items()]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv_rows(path: str | Path, columns: Sequence[str]) -> list[dict[str, float]]:
    """
    Read a numeric CSV whose header must be exactly `columns`. Returns one dict per data row.
    Raises CsvFormatError with the offending line number for a wrong header, a short row or a
    non-numeric cell, and for a file without data rows.
    """

    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"csv file not found: {path}")

    rows: list[dict[str, float]] = []
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(str(path), 1, "file is empty")
        if [name.strip() for name in header] != list(columns):
            raise CsvFormatError(str(path), 1, f"expected header {','.join(columns)}")

        for cells in reader:
            line_no = reader.line_num
            if not cells or all(not cell.strip() for cell in cells):
                continue  # Trailing blank lines
            if len(cells) != len(columns):
                raise CsvFormatError(
                    str(path), line_no, f"expected {len(columns)} fields, got {len(cells)}"
                )
            try:
                rows.append({name: float(cell) for name, cell in zip(columns, cells)})
            except ValueError as e:
                raise CsvFormatError(str(path), line_no, f"non-numeric value ({e})") from e

    if not rows:
        raise CsvFormatError(str(path), 2, "no data rows")
    return rows


def write_csv(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV with a header row, floats in repr form so the bytes are reproducible"""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    return path


def _cell(value: Any) -> str:
    """Format a single CSV cell"""

    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_json(path: str | Path, payload: Any) -> Path:
    """Write a json report with stable key order and indentation"""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path
