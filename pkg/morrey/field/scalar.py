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
"""Grid functions, pinned-node constraints and multilinear interpolation."""

import logging
from typing import Callable, NamedTuple, Optional, Union

import numpy as np
from pydantic import BaseModel, validator

from ..errors import ConstraintError, FieldError
from ..types import FloatArray, NodeIndex, PointLike, as_point
from .grid import SNAP_TOL, Grid

log = logging.getLogger(__name__)


class ScalarField:
    """Real values at every node of a grid.

    The unused corner node (n=2) is always stored as 0 and never read.
    Values are immutable; arithmetic returns new fields.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values: FloatArray, copy: bool = True):
        arr = np.array(values, dtype=np.float64) if copy else np.asarray(values, dtype=np.float64)
        if not arr.flags.writeable:
            arr = arr.copy()
        if arr.shape != grid.shape:
            raise FieldError(f"values of shape {arr.shape} do not match grid shape {grid.shape}")
        if not np.all(np.isfinite(arr)):
            raise FieldError("field values must be finite")
        if grid.corner is not None:
            arr[grid.corner] = 0.0
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape), copy=False)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[..., FloatArray]) -> "ScalarField":
        """Sample a vectorized function ``fn(x)`` or ``fn(x, y)`` at the nodes."""
        values = np.broadcast_to(fn(*grid.coordinates()), grid.shape)
        return cls(grid, values)

    def with_values(self, values: FloatArray) -> "ScalarField":
        return ScalarField(self.grid, values)

    def value_at(self, index: NodeIndex) -> float:
        if index == self.grid.corner:
            raise FieldError("the corner node carries no value")
        return float(self.values[index])

    def dof_values(self) -> FloatArray:
        """Values at degree-of-freedom nodes, flattened."""
        return self.values[self.grid.dof_mask()]

    def is_constant(self) -> bool:
        dof = self.dof_values()
        return bool(np.all(dof == dof[0]))

    def _coerce(self, other: Union["ScalarField", float]) -> Union[FloatArray, float]:
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise FieldError("fields live on different grids")
            return other.values
        return float(other)

    def __add__(self, other: Union["ScalarField", float]) -> "ScalarField":
        return ScalarField(self.grid, self.values + self._coerce(other), copy=False)

    __radd__ = __add__

    def __sub__(self, other: Union["ScalarField", float]) -> "ScalarField":
        return ScalarField(self.grid, self.values - self._coerce(other), copy=False)

    def __mul__(self, other: float) -> "ScalarField":
        return ScalarField(self.grid, self.values * float(other), copy=False)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.values, copy=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.grid == other.grid and bool(np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        return f"ScalarField(n={self.grid.n}, ell={self.grid.ell}, k={self.grid.k})"


class PinnedNode(NamedTuple):
    index: NodeIndex
    value: float


class ConstraintSet(BaseModel):
    """Nodes whose values are held fixed during minimization."""

    grid: Grid
    entries: tuple[PinnedNode, ...]

    class Config:
        frozen = True

    @validator("entries")
    def validate_entries(cls, v: tuple[PinnedNode, ...], values: dict) -> tuple[PinnedNode, ...]:
        grid: Optional[Grid] = values.get("grid")
        if grid is None:
            return v
        if len(v) < 2:
            raise ValueError("at least two pinned nodes are required")
        indices = [tuple(e.index) for e in v]
        if len(set(indices)) != len(indices):
            raise ValueError(f"pinned nodes must be distinct: {indices}")
        pinned_values = [e.value for e in v]
        if len(set(pinned_values)) != len(pinned_values):
            raise ValueError(f"pinned values must be distinct: {pinned_values}")
        for idx in indices:
            if len(idx) != grid.n or any(not 0 <= i < grid.N for i in idx):
                raise ValueError(f"pinned node {idx} outside grid of shape {grid.shape}")
            if idx == grid.corner:
                raise ValueError("the corner node cannot be pinned")
        if not all(np.isfinite(pinned_values)):
            raise ValueError("pinned values must be finite")
        return v

    @classmethod
    def build(cls, grid: Grid, entries: list[tuple[NodeIndex, float]]) -> "ConstraintSet":
        try:
            return cls(grid=grid, entries=tuple(PinnedNode(tuple(i), float(v)) for i, v in entries))
        except ValueError as e:
            raise ConstraintError(str(e)) from e

    @property
    def indices(self) -> list[NodeIndex]:
        return [e.index for e in self.entries]

    @property
    def high(self) -> PinnedNode:
        """The pinned node with the largest value."""
        return max(self.entries, key=lambda e: e.value)

    @property
    def low(self) -> PinnedNode:
        return min(self.entries, key=lambda e: e.value)

    def point(self, entry: PinnedNode) -> FloatArray:
        return self.grid.node_point(entry.index)

    def midpoint(self) -> FloatArray:
        return 0.5 * (self.point(self.high) + self.point(self.low))

    def mask(self) -> np.ndarray:
        m = np.zeros(self.grid.shape, dtype=bool)
        for e in self.entries:
            m[e.index] = True
        return m

    def free_mask(self) -> np.ndarray:
        """Degree-of-freedom nodes that are not pinned."""
        return self.grid.dof_mask() & ~self.mask()

    def apply(self, field: ScalarField) -> ScalarField:
        """Copy of ``field`` with the pinned values written in."""
        if field.grid != self.grid:
            raise ConstraintError("constraints and field live on different grids")
        values = field.values.copy()
        for e in self.entries:
            values[e.index] = e.value
        return ScalarField(self.grid, values, copy=False)

    def satisfied_by(self, field: ScalarField) -> bool:
        return all(field.values[e.index] == e.value for e in self.entries)


def canonical_constraints(grid: Grid) -> ConstraintSet:
    """Pin u(0, 1) = 1 and u(0, -1) = -1 (u(1) = 1, u(-1) = -1 when n=1)."""
    c, k = grid.center, grid.k
    if grid.n == 1:
        entries = [((c + k,), 1.0), ((c - k,), -1.0)]
    else:
        entries = [((c, c + k), 1.0), ((c, c - k), -1.0)]
    return ConstraintSet.build(grid, entries)


def completed_values(field: ScalarField) -> FloatArray:
    """Node values with the corner replaced by its affine completion."""
    grid = field.grid
    if grid.corner is None:
        return field.values
    v = field.values.copy()
    m = grid.N - 1
    v[m, m] = v[m - 1, m] + v[m, m - 1] - v[m - 1, m - 1]
    return v


def interpolate_many(field: ScalarField, points: FloatArray) -> FloatArray:
    """Multilinear interpolation at each row of ``points`` (shape ``(m, n)``)."""
    grid = field.grid
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[1] != grid.n:
        raise FieldError(f"points of dimension {pts.shape[1]} on a {grid.n}D grid")
    if np.any(np.abs(pts) > grid.ell + 1e-12):
        raise FieldError(f"point outside domain [-{grid.ell}, {grid.ell}]^{grid.n}")

    t = np.clip((pts + grid.ell) * grid.k, 0.0, grid.N - 1)
    snapped = np.rint(t)
    t = np.where(np.abs(t - snapped) <= SNAP_TOL, snapped, t)
    lo = np.minimum(np.floor(t).astype(np.intp), grid.N - 2)
    f = t - lo
    v = completed_values(field)

    if grid.n == 1:
        i = lo[:, 0]
        fx = f[:, 0]
        return (1.0 - fx) * v[i] + fx * v[i + 1]

    i, j = lo[:, 0], lo[:, 1]
    fx, fy = f[:, 0], f[:, 1]
    return ((1.0 - fx) * (1.0 - fy) * v[i, j]
            + fx * (1.0 - fy) * v[i + 1, j]
            + (1.0 - fx) * fy * v[i, j + 1]
            + fx * fy * v[i + 1, j + 1])


def interpolate(field: ScalarField, point: PointLike) -> float:
    """Value of the multilinear interpolant at ``point``.

    Exact at nodes; the corner cell uses the affine completion of the corner value.
    """
    x = as_point(point)
    if x.shape != (field.grid.n,):
        raise FieldError(f"expected a {field.grid.n}D point, got {tuple(x)}")
    return float(interpolate_many(field, x[None, :])[0])
