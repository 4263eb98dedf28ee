"""Main application file for creating and configuring the command-line application."""

from typing import Any  # Used for type hints
import click  # Used for creating the command group
from extensions import configure_logging, import_string
from cli_commands import registerable_cli_commands


def create_app(
    config_class: str | type[Any] = "config.DevConfig",
) -> click.Group:  # Sets DevConfig as default configuration unless different config passed
    """Create the command group, configured by the profile passed as config_class"""

    profile = import_string(config_class) if isinstance(config_class, str) else config_class

    @click.group(context_settings={"obj": profile})  # Every command receives the profile
    @click.option("--log-level", default=None, help="Overrides the profile's log level.")
    def app(log_level: str | None) -> None:
        """Wave energy converter control toolkit."""

        configure_logging((log_level or profile.LOG_LEVEL).upper())

    for command in registerable_cli_commands:  # Iterate CLI commands
        app.add_command(command)  # Register each CLI command

    return app  # Return the configured command group
