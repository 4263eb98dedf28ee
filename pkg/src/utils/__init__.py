"""Init file that allows modules to be imported from utils directory."""

from .validation import (
    checks_input,
    checks_array,
    checks_series,
    validate_fraction,
    validate_positive_list,
)
from .error_handling import handle_errors
