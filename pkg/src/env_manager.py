"""
Environment Manager for chi-lt
Handles hierarchical .env file loading and the solver settings read from it
"""
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from dotenv import dotenv_values

from src.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
SETTING_KEYS = ("CHI_LT_BUDGET_NODES", "CHI_LT_BUDGET_SECONDS", "CHI_LT_THREADS", "LOG_LEVEL")


class EnvManager:
    """
    Manages hierarchical environment configuration for chi-lt.

    Loading order (later overrides earlier):
    1. Global config (~/.chi-lt/.env.global)
    2. Project defaults (.env.defaults)
    3. Local overrides (.env.local)
    4. Main .env file (.env)

    Variables already present in the process environment win over all files.
    """

    def __init__(self, project_path: Optional[Path] = None, home: Optional[Path] = None):
        self.project_path = Path(project_path or Path.cwd())
        self.global_config_dir = Path(home or Path.home()) / ".chi-lt"
        self.loaded_files: List[Path] = []

    def env_files(self) -> List[Tuple[Path, str]]:
        return [
            (self.global_config_dir / ".env.global", "Global Config"),
            (self.project_path / ".env.defaults", "Project Defaults"),
            (self.project_path / ".env.local", "Local Overrides"),
            (self.project_path / ".env", "Main Config"),
        ]

    def load_hierarchical_env(self, apply_to_environ: bool = False) -> Dict[str, str]:
        """
        Merge the env files in order and return the result.

        With ``apply_to_environ`` the merged values are exported to
        ``os.environ`` for keys the process has not already set.
        """
        merged: Dict[str, str] = {}
        self.loaded_files = []
        for env_file, _ in self.env_files():
            if env_file.exists():
                values = {k: v for k, v in dotenv_values(env_file).items() if v is not None}
                merged.update(values)
                self.loaded_files.append(env_file)
                logger.debug(f"Loaded {len(values)} settings from {env_file}")

        if apply_to_environ:
            for key, value in merged.items():
                os.environ.setdefault(key, value)
        return merged

    def effective(self) -> Dict[str, str]:
        """File settings overlaid with the process environment."""
        merged = self.load_hierarchical_env()
        merged.update({key: value for key, value in os.environ.items() if key in SETTING_KEYS})
        return merged

    def config_info(self) -> List[Tuple[str, Path, bool]]:
        """(description, path, exists) for every file in loading order."""
        return [(desc, path, path.exists()) for path, desc in self.env_files()]


def _parse_int(values: Mapping[str, str], key: str, default: int, minimum: int) -> int:
    raw = values.get(key)
    if raw is None or raw == "":
        return default
    try:
        number = int(raw.replace("_", ""))
    except ValueError:
        raise InvalidParameterError(f"{key} must be an integer, got {raw!r}") from None
    if number < minimum:
        raise InvalidParameterError(f"{key} must be at least {minimum}, got {number}")
    return number


def _parse_seconds(values: Mapping[str, str], key: str) -> Optional[float]:
    raw = values.get(key)
    if raw is None or raw == "":
        return None
    try:
        seconds = float(raw)
    except ValueError:
        raise InvalidParameterError(f"{key} must be a number of seconds, got {raw!r}") from None
    if seconds <= 0:
        raise InvalidParameterError(f"{key} must be positive, got {seconds}")
    return seconds


@dataclass
class SolverSettings:
    """Solver defaults; command-line flags take precedence over these."""

    budget_nodes: int = 50_000_000
    budget_seconds: Optional[float] = None
    threads: int = 1
    log_level: str = "WARNING"

    @classmethod
    def from_values(cls, values: Mapping[str, str]) -> "SolverSettings":
        level = values.get("LOG_LEVEL", "WARNING").upper()
        if level not in LOG_LEVELS:
            raise InvalidParameterError(f"LOG_LEVEL must be one of {LOG_LEVELS}, got {level!r}")
        return cls(
            budget_nodes=_parse_int(values, "CHI_LT_BUDGET_NODES", 50_000_000, 1),
            budget_seconds=_parse_seconds(values, "CHI_LT_BUDGET_SECONDS"),
            threads=_parse_int(values, "CHI_LT_THREADS", 1, 1),
            log_level=level,
        )

    @classmethod
    def from_env(cls, project_path: Optional[Path] = None, home: Optional[Path] = None) -> "SolverSettings":
        return cls.from_values(EnvManager(project_path, home).effective())

