"""Parsed run configuration: one loaded dict per INI section, plus where the file lives"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any
from utils.error_handling import ConfigError


@dataclass(frozen=True, eq=False)
class RunConfig:
    path: Path  # The INI file; relative paths inside it resolve against its directory
    sections: dict[str, dict[str, Any]] = field(default_factory=dict)

    def has(self, name: str) -> bool:
        return name in self.sections

    def section(self, name: str) -> dict[str, Any]:
        """Loaded section, ConfigError when the command needs it and it is absent"""

        if name not in self.sections:
            raise ConfigError(f"{self.path}: section [{name}] is required for this command")
        return self.sections[name]

    def optional(self, name: str) -> dict[str, Any] | None:
        return self.sections.get(name)
