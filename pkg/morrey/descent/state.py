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
"""Descent configuration, state and run manifest."""

import datetime
import math
from pathlib import Path
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, Field, root_validator, validator
from pydantic_yaml import YamlModelMixin

from ..field import ScalarField

HistorySample = Tuple[int, float]


class DescentConfig(BaseModel):
    """Step size, stopping rule and bookkeeping of a descent run."""

    tau: float = 1e-10
    """Fixed step size, or the starting rung of the adaptive ladder."""
    max_iters: int = 100_000_000
    grad_tol: Optional[float] = None
    """Absolute residual threshold. Defaults to ``rel_tol`` times the initial residual."""
    rel_tol: float = 1e-8
    adaptive: bool = False
    momentum: bool = False
    """Extrapolate from the previous iterate, restarting whenever the energy would rise."""
    armijo: float = 1e-4
    max_doublings: int = 4
    """Per-step growth cap of the adaptive ladder (factor ``2**max_doublings``)."""
    max_halvings: int = 60
    divergence_factor: float = 10.0
    checkpoint_every: int = 0
    history_every: int = 1
    log_every: int = 10_000
    seed: int = 0

    class Config:
        frozen = True

    @validator("tau")
    def validate_tau(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"tau must be positive, got {v}")
        return v

    @validator("max_iters")
    def validate_max_iters(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"max_iters must be >= 1, got {v}")
        return v

    @validator("grad_tol")
    def validate_grad_tol(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v < 0:
            raise ValueError(f"grad_tol must be >= 0, got {v}")
        return v

    @validator("checkpoint_every", "log_every", "max_doublings", "max_halvings")
    def validate_nonnegative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"expected a nonnegative integer, got {v}")
        return v

    @validator("history_every")
    def validate_history_every(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"history_every must be >= 1, got {v}")
        return v

    @root_validator(skip_on_failure=True)
    def validate_armijo(cls, values: dict[str, Any]) -> dict[str, Any]:
        if not 0 < values["armijo"] < 1:
            raise ValueError(f"armijo constant must lie in (0, 1), got {values['armijo']}")
        return values


class DescentState(BaseModel):
    field: ScalarField
    iteration: int = 0
    energy_history: List[HistorySample] = Field(default_factory=list)
    grad_inf_history: List[HistorySample] = Field(default_factory=list)
    config: DescentConfig = Field(default_factory=DescentConfig)
    tau: Optional[float] = None
    """Last accepted step size."""
    tol: Optional[float] = None
    """Absolute residual threshold the run stopped against."""
    stop_reason: Optional[str] = None

    class Config:
        arbitrary_types_allowed = True

    @property
    def energy(self) -> Optional[float]:
        return self.energy_history[-1][1] if self.energy_history else None

    @property
    def residual(self) -> Optional[float]:
        return self.grad_inf_history[-1][1] if self.grad_inf_history else None


class HistoryPoint(BaseModel):
    iteration: int
    value: float


class RunManifest(YamlModelMixin, BaseModel):
    """Record of a descent run, written next to its checkpoints."""

    config: DescentConfig
    p: float
    n: int
    ell: int
    k: int
    started: datetime.datetime = Field(default_factory=datetime.datetime.now)
    finished: Optional[datetime.datetime] = None
    start_iteration: int = 0
    iterations: int = 0
    tol: Optional[float] = None
    tau: Optional[float] = None
    stop_reason: Optional[str] = None
    energy_history: List[HistoryPoint] = Field(default_factory=list)
    grad_inf_history: List[HistoryPoint] = Field(default_factory=list)
    checkpoints: List[str] = Field(default_factory=list)

    def record(self, state: DescentState) -> None:
        self.finished = datetime.datetime.now()
        self.iterations = state.iteration
        self.stop_reason = state.stop_reason
        self.tau = state.tau
        self.energy_history = [HistoryPoint(iteration=i, value=e) for i, e in state.energy_history]
        self.grad_inf_history = [HistoryPoint(iteration=i, value=r)
                                 for i, r in state.grad_inf_history]

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.yaml(), encoding="utf-8")
