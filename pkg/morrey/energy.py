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
"""Discrete p-Dirichlet energy and its exact gradient.

For n=2 the energy sums, over the lower-left node of every cell, the forward
difference stencil ``((v[i+1,j]-v[i,j])^2 + (v[i,j+1]-v[i,j])^2)^(p/2)``.
The last row and column contribute only as forward neighbours, so the corner
node never enters.
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, validator

from .errors import EnergyError
from .field import ConstraintSet, Grid, ScalarField
from .types import FloatArray, NodeIndex

log = logging.getLogger(__name__)


class EnergyParams(BaseModel):
    p: float
    """Integrability exponent, p > n."""
    smoothing_eps: float = 0.0
    """Regularize ``|d|^p`` as ``(|d|^2 + eps^2)^(p/2) - eps^p``. Needed for p < 2."""

    class Config:
        frozen = True

    @validator("p")
    def validate_p(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 1:
            raise ValueError(f"p must be finite and > 1, got {v}")
        return v

    @validator("smoothing_eps")
    def validate_eps(cls, v: float) -> float:
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"smoothing_eps must be >= 0, got {v}")
        return v

    @property
    def alpha(self) -> float:
        """Hölder exponent 1 - n/p, for n=2. See :meth:`holder_exponent`."""
        return self.holder_exponent(2)

    def holder_exponent(self, n: int) -> float:
        return 1.0 - n / self.p

    def check(self, grid: Grid) -> None:
        if self.p <= grid.n:
            raise EnergyError(f"p={self.p} must exceed the dimension n={grid.n}")


class GradientField:
    """Gradient of the discrete energy with respect to every node value.

    Entries at pinned nodes are computed but flagged; the corner entry is 0.
    """

    __slots__ = ("grid", "values", "pinned")

    def __init__(self, grid: Grid, values: FloatArray, pinned: Optional[np.ndarray] = None):
        self.grid = grid
        self.values = values
        self.pinned = pinned if pinned is not None else np.zeros(grid.shape, dtype=bool)

    def free_values(self) -> FloatArray:
        return self.values[self.grid.dof_mask() & ~self.pinned]

    def sup_norm(self) -> float:
        free = self.free_values()
        return float(np.max(np.abs(free))) if free.size else 0.0


def _stencil_terms(values: FloatArray, n: int):
    if n == 1:
        d = values[1:] - values[:-1]
        return d * d, d, None
    dx = values[1:, :-1] - values[:-1, :-1]
    dy = values[:-1, 1:] - values[:-1, :-1]
    return dx * dx + dy * dy, dx, dy


def cell_energies(values: FloatArray, n: int, p: float, eps: float = 0.0) -> FloatArray:
    """Per-stencil energy contributions, indexed by the base node."""
    s, _, _ = _stencil_terms(values, n)
    if eps > 0:
        return (s + eps * eps) ** (0.5 * p) - eps ** p
    return s ** (0.5 * p)


def energy_of(values: FloatArray, n: int, p: float, eps: float = 0.0) -> float:
    return float(np.sum(cell_energies(values, n, p, eps)))


def gradient_of(values: FloatArray, n: int, p: float, eps: float = 0.0) -> FloatArray:
    s, dx, dy = _stencil_terms(values, n)
    w = p * (s + eps * eps) ** (0.5 * p - 1.0)
    g = np.zeros_like(values)
    if n == 1:
        wd = w * dx
        g[:-1] -= wd
        g[1:] += wd
        return g
    wx, wy = w * dx, w * dy
    g[:-1, :-1] -= wx + wy
    g[1:, :-1] += wx
    g[:-1, 1:] += wy
    return g


def discrete_energy(field: ScalarField, params: EnergyParams) -> float:
    """Sum of stencil terms ``|D v|^p`` (smoothed when ``smoothing_eps > 0``)."""
    params.check(field.grid)
    return energy_of(field.values, field.grid.n, params.p, params.smoothing_eps)


def energy_gradient(field: ScalarField,
                    params: EnergyParams,
                    constraints: Optional[ConstraintSet] = None) -> GradientField:
    """Exact partial derivatives of :func:`discrete_energy`."""
    params.check(field.grid)
    if params.p < 2 and params.smoothing_eps == 0:
        raise EnergyError(f"the gradient is singular for p={params.p} < 2 without smoothing")
    g = gradient_of(field.values, field.grid.n, params.p, params.smoothing_eps)
    pinned = constraints.mask() if constraints is not None else None
    return GradientField(field.grid, g, pinned)


def physical_dirichlet_norm(field: ScalarField, params: EnergyParams) -> float:
    """Approximate ``(∫|Du|^p)^(1/p)`` as ``(h^(n-p) E(v))^(1/p)``, unsmoothed."""
    params.check(field.grid)
    grid = field.grid
    e = energy_of(field.values, grid.n, params.p)
    return (grid.h ** (grid.n - params.p) * e) ** (1.0 / params.p)


def p_laplacian_residual(field: ScalarField,
                         params: EnergyParams,
                         constraints: Optional[ConstraintSet] = None) -> float:
    """Largest absolute gradient entry over unpinned degrees of freedom."""
    return energy_gradient(field, params, constraints).sup_norm()


def constraint_multiplier(field: ScalarField, params: EnergyParams, index: NodeIndex) -> float:
    """Scaled gradient entry ``(1/p) h^(n-p) dE/dv`` at a pinned node.

    At a discrete minimizer this is the weight of the Dirac mass that the
    p-Laplacian places at that node.
    """
    g = energy_gradient(field, params)
    grid = field.grid
    return float(g.values[index]) * grid.h ** (grid.n - params.p) / params.p
