"""Validation functions to keep code DRY while validating data"""

import math  # Used to reject nan and inf
from typing import Any  # Used for type hints
import numpy as np  # Array inputs are validated as well as scalars
from marshmallow import ValidationError  # Schema level validation error
from utils.error_handling import ModelError  # Model level validation error


def checks_input(
    value: Any,
    field_name: str,
    required: bool = True,
    data_type: type[Any] = float,
    min_val: float | None = None,
    max_val: float | None = None,
    min_exclusive: bool = False,
    max_exclusive: bool = False,
) -> Any:
    """
    Takes a field value from a model's __post_init__, checking if value exists if required,
    if instance matches correct data type, if it is finite and if it meets range requirements,
    returning a ModelError on invalid input. Integers are accepted where floats are
    expected and are returned converted; booleans are never accepted as numbers.
    """

    # Return None if no value and not required, or ModelError if required
    if value is None:
        if required:
            raise ModelError(f"{field_name} is required")
        return None

    if isinstance(value, (bool, np.bool_)):  # bool is a subclass of int
        raise ModelError(f"{field_name} must be type {data_type.__name__}")

    if data_type is float:
        if not isinstance(value, (int, float, np.integer, np.floating)):
            raise ModelError(f"{field_name} must be type float")
        value = float(value)
        if not math.isfinite(value):
            raise ModelError(f"{field_name} must be finite")
    elif data_type is int:
        if not isinstance(value, (int, np.integer)):
            raise ModelError(f"{field_name} must be type int")
        value = int(value)
    elif not isinstance(value, data_type):  # Checks if value matches data_type (e.g. str)
        raise ModelError(f"{field_name} must be type {data_type.__name__}")

    if min_val is not None:
        if min_exclusive and not value > min_val:
            raise ModelError(f"{field_name} must be greater than {min_val}")
        if not min_exclusive and value < min_val:
            raise ModelError(f"{field_name} must be at least {min_val}")

    if max_val is not None:
        if max_exclusive and not value < max_val:
            raise ModelError(f"{field_name} must be less than {max_val}")
        if not max_exclusive and value > max_val:
            raise ModelError(f"{field_name} cannot exceed {max_val}")

    return value


def checks_array(value: Any, field_name: str, shape: tuple[int, ...]) -> np.ndarray:
    """
    Converts value to a read-only float array, checking its shape and that every entry is
    finite, returning a ModelError on invalid input.
    """

    try:
        array = np.array(value, dtype=float)  # Always a private copy
    except (TypeError, ValueError) as e:
        raise ModelError(f"{field_name} must be numeric: {e}") from e

    if array.shape != shape:
        raise ModelError(f"{field_name} must have shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ModelError(f"{field_name} must be finite")

    array.setflags(write=False)  # Frozen models hold frozen arrays
    return array


def checks_series(value: Any, field_name: str, min_len: int = 1) -> np.ndarray:
    """Converts a 1-D sequence to a read-only float array with at least min_len finite entries"""

    array = np.array(value, dtype=float)
    if array.ndim != 1:
        raise ModelError(f"{field_name} must be one dimensional")
    if array.size < min_len:
        raise ModelError(f"{field_name} must have at least {min_len} samples")
    if not np.all(np.isfinite(array)):
        raise ModelError(f"{field_name} must be finite")
    array.setflags(write=False)
    return array


def validate_fraction(value: float) -> None:
    """Custom validator for schema fields that must lie in (0, 1]"""

    if not 0 < value <= 1:
        raise ValidationError("Must be greater than 0 and at most 1.")


def validate_positive_list(values: list[float]) -> None:
    """Custom validator for comma separated grids, every entry must be positive"""

    if len(values) == 0:
        raise ValidationError("At least one value is required.")
    if any(not v > 0 for v in values):
        raise ValidationError("All values must be positive.")
