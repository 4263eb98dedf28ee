"""Exception hierarchy for the toolkit and the decorator that maps it to command exit codes"""

import json  # Error payloads are echoed as json, one object per error
import logging
from functools import wraps  # Used to preserve metadata of wrapped functions
from typing import Any, Callable  # Used for type hints
import click  # Exit codes and stderr output for commands
from marshmallow import ValidationError  # Schema level errors

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 1
EXIT_PARTIAL_FAILURE = 2


class WecError(Exception):
    """Base class for every error raised deliberately by the toolkit"""


class ConfigError(WecError):
    """Run configuration is unreadable, incomplete, or references a missing file"""


class ModelError(WecError, ValueError):
    """Domain value failed validation on construction (e.g. negative wave height)"""


class LayoutError(WecError, ValueError):
    """Sequence lengths or vector dimensions do not match what the operation expects"""


class DivergenceError(WecError):
    """A simulated state became non-finite"""

    def __init__(self, step: int, message: str | None = None):
        self.step = step  # Index of the first sample with a non-finite state
        super().__init__(message or f"simulation diverged at step {step}")


class SingularRegressorError(WecError):
    """Least-squares regressor matrix is rank deficient"""

    def __init__(self, step: str, direction: list[float] | None = None, message: str = ""):
        self.step = step  # Identification step name, e.g. "fit_A"
        self.direction = direction  # Null direction of the regressor, if there is one
        detail = f" along direction {direction}" if direction is not None else ""
        super().__init__(f"{step}: singular regressor{detail}{': ' + message if message else ''}")


class InstanceTooLargeError(WecError):
    """Brute-force enumeration requested on an instance beyond its limits"""


class UndefinedPeriodError(WecError):
    """Signal has fewer than two upward zero crossings"""


class FitError(WecError):
    """Regression family cannot be fitted to the given samples"""


class CsvFormatError(WecError):
    """A CSV file is empty, has the wrong header, or a malformed row"""

    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line  # 1-based line number in the file, header is line 1
        super().__init__(f"{path}:{line}: {message}")


class PartialFailure(WecError):
    """Command finished and wrote its outputs, but some rows or periods failed"""


def _fail(code: int, payload: dict[str, Any]) -> None:
    """Echo a json error payload to stderr and exit with the given code"""

    click.echo(json.dumps(payload), err=True)
    raise click.exceptions.Exit(code)


def handle_errors(func: Callable) -> Callable:
    """Decorator function to process error handling in commands"""

    @wraps(func)  # Preserves metadata of function being decorated
    def decorated_function(*args, **kwargs):
        try:
            return func(*args, **kwargs)  # Attempts command with error handling

        except ValidationError as e:  # Schema level validation errors
            _fail(
                EXIT_CONFIG_ERROR,
                {"error": "Config Validation Failed", "messages": e.messages},
            )

        except PartialFailure as e:  # Outputs are written, some rows failed
            logger.warning("partial failure: %s", e)
            _fail(EXIT_PARTIAL_FAILURE, {"error": "Partial Failure", "message": str(e)})

        except ConfigError as e:
            _fail(EXIT_CONFIG_ERROR, {"error": "Config Error", "message": str(e)})

        except CsvFormatError as e:
            _fail(
                EXIT_CONFIG_ERROR,
                {"error": "Malformed CSV", "message": str(e), "line": e.line},
            )

        except SingularRegressorError as e:  # Identification step could not be solved
            _fail(
                EXIT_CONFIG_ERROR,
                {"error": "Identification Failed", "step": e.step, "message": str(e)},
            )

        except ModelError as e:  # Model level validation errors
            _fail(EXIT_CONFIG_ERROR, {"error": "Model Validation Failed", "message": str(e)})

        except WecError as e:  # Any other deliberate error
            _fail(EXIT_CONFIG_ERROR, {"error": type(e).__name__, "message": str(e)})

        except OSError as e:  # Unreadable or unwritable files
            _fail(EXIT_CONFIG_ERROR, {"error": "File Error", "message": str(e)})

    return decorated_function
