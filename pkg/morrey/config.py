##
##  Copyright (c) 2023 Chakib Ben Ziane <contact@blob42.xyz>. All rights reserved.
##
##  SPDX-License-Identifier: AGPL-3.0-or-later
##
##  This file is part of Morrey.
##
##  This program is free software: you can redistribute it and/or modify it under
##  the terms of the GNU Affero General Public License as published by the Free
##  Software Foundation, either version 3 of the License, or (at your option) any
##  later version.
##
##  This program is distributed in the hope that it will be useful, but WITHOUT
##  ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
##  FOR A PARTICULAR PURPOSE.  See the GNU Affero General Public License for more
##  details.
##
##  You should have received a copy of the GNU Affero General Public License along
##  with this program.  If not, see <http://www.gnu.org/licenses/>.
##
"""Config manager for morrey"""

import math
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseSettings, Field, ValidationError, root_validator, validator
from xdg import BaseDirectory  # type: ignore

from .errors import ConfigError

ANALYSES = ("holder", "symmetry", "bounds", "quasiconcavity", "singular",
            "midplane", "gradient", "gap", "stability")
SEMINORM_MODES = ("auto", "exact", "sampled")


def default_output_dir() -> str:
    """``$XDG_DATA_HOME/morrey/runs``, not created until a run writes to it."""
    return str(Path(BaseDirectory.xdg_data_home) / "morrey" / "runs")


class Settings(BaseSettings):
    """Process-wide settings for morrey."""

    class Config:
        """Pydantic config for morrey settings."""
        env_prefix = "MORREY_"
        validate_assignment = True

    debug: bool = False


class ExperimentConfig(BaseSettings):
    """Everything a ``morrey run`` needs: problem, descent, analyses, outputs."""

    class Config:
        """Pydantic config for experiment runs."""
        env_prefix = "MORREY_"
        extra = "forbid"
        validate_assignment = True

        @classmethod
        def customise_sources(cls, init_settings, env_settings,
                              file_secret_settings):
            """Explicit values win over the environment."""
            return (
                init_settings,
                env_settings,
                file_secret_settings,
            )

    # problem
    n: int = 2
    ell: int = 6
    k: int = 10
    p: float = 4.0
    smoothing_eps: float = 0.0
    x0: Optional[list[float]] = None
    """Point pinned to ``alpha``. Defaults to (0, 1), or 1 when n=1."""
    y0: Optional[list[float]] = None
    alpha: float = 1.0
    beta: float = -1.0

    # descent
    tau: float = 1e-10
    max_iters: int = 100_000_000
    grad_tol: Optional[float] = None
    rel_tol: float = 1e-8
    adaptive: bool = False
    momentum: bool = False
    checkpoint_every: int = 0
    history_every: int = 100
    log_every: int = 10_000
    resume: Optional[str] = None
    """Checkpoint archive to continue from."""

    # analyses
    analysis: list[str] = Field(default_factory=lambda: list(ANALYSES))
    levels: list[float] = Field(default_factory=lambda: [0.2, 0.4, 0.6, 0.8])
    seminorm_mode: str = "auto"
    seminorm_samples: int = 1_000_000
    stability_trials: int = 5
    stability_amplitude: float = 0.02
    contour_levels: list[float] = Field(
        default_factory=lambda: [-0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8])

    # outputs
    out: str = Field(default_factory=default_output_dir)
    seed: int = 0

    @validator("x0", "y0", "grad_tol", "resume", pre=True)
    def empty_is_none(cls, v: Any) -> Any:
        if isinstance(v, str) and v.strip() == "":
            return None
        return v

    @validator("analysis", "levels", "contour_levels", "x0", "y0", pre=True)
    def split_lists(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [s.strip() for s in v.split(",") if s.strip()]
        return v

    @validator("n")
    def validate_n(cls, v: int) -> int:
        if v not in (1, 2):
            raise ValueError(f"n must be 1 or 2, got {v}")
        return v

    @validator("ell")
    def validate_ell(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"ell must be >= 2, got {v}")
        return v

    @validator("k", "max_iters", "history_every", "seminorm_samples")
    def validate_positive_int(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"expected a positive integer, got {v}")
        return v

    @validator("checkpoint_every", "log_every", "stability_trials")
    def validate_nonnegative_int(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"expected a nonnegative integer, got {v}")
        return v

    @validator("tau")
    def validate_tau(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"tau must be positive, got {v}")
        return v

    @validator("levels", each_item=True)
    def validate_level(cls, v: float) -> float:
        if not 0.1 <= v <= 0.9:
            raise ValueError(f"quasiconcavity level {v} outside [0.1, 0.9]")
        return v

    @validator("analysis", each_item=True)
    def validate_analysis(cls, v: str) -> str:
        if v not in ANALYSES:
            raise ValueError(f"unknown analysis {v!r}, expected one of {ANALYSES}")
        return v

    @validator("seminorm_mode")
    def validate_mode(cls, v: str) -> str:
        if v not in SEMINORM_MODES:
            raise ValueError(f"unknown seminorm mode {v!r}, expected one of {SEMINORM_MODES}")
        return v

    @root_validator(skip_on_failure=True)
    def validate_problem(cls, values: dict[str, Any]) -> dict[str, Any]:
        n, p = values["n"], values["p"]
        if not p > n:
            raise ValueError(f"p must exceed n={n}, got p={p}")
        if p < 2 and values["smoothing_eps"] == 0:
            raise ValueError(f"p={p} < 2 needs smoothing_eps > 0")
        for name in ("x0", "y0"):
            pt = values.get(name)
            if pt is not None and len(pt) != n:
                raise ValueError(f"{name} must have {n} coordinates, got {pt}")
        if values["alpha"] == values["beta"]:
            raise ValueError("alpha and beta must differ")
        return values


def _format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_format_value(x) for x in v)
    return str(v)


def serialize_config(config: ExperimentConfig) -> str:
    """Flat ``key=value`` lines in field order."""
    return "".join(f"{key}={_format_value(getattr(config, key))}\n"
                   for key in ExperimentConfig.__fields__)


def parse_config(text: str, **overrides: Any) -> ExperimentConfig:
    """Parse ``key=value`` lines; ``#`` comments and blank lines are skipped."""
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ExperimentConfig.__fields__:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


class ConfigManager():

    def __init__(self, config_file: Optional[Union[str, Path]] = None, **overrides: Any):
        self.config_path = Path(config_file) if config_file is not None else None
        if self.config_path is not None:
            self.load_config(**overrides)
        else:
            try:
                self.config = ExperimentConfig(
                    **{k: v for k, v in overrides.items() if v is not None})
            except ValidationError as e:
                raise ConfigError(str(e)) from e

    @property
    def C(self) -> ExperimentConfig:
        """Shortcut to self.config."""
        return self.config

    def load_config(self, **overrides: Any) -> None:
        assert self.config_path is not None
        # OSError propagates: the caller maps it to the I/O exit status
        text = self.config_path.read_text(encoding="utf-8")
        self.config = parse_config(text, **overrides)

    def save_config(self, path: Optional[Union[str, Path]] = None) -> Path:
        target = Path(path) if path is not None else self.config_path
        if target is None:
            raise ConfigError("no config path to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(serialize_config(self.config), encoding="utf-8")
        return target

    def set(self, key: str, value: Any) -> None:
        try:
            setattr(self.config, key, value)
        except (ValueError, TypeError) as e:
            raise ConfigError(str(e)) from e

    def get(self, key: str, default: Any = None) -> Any:
        return getattr(self.config, key, default)


APP_SETTINGS = Settings()
