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
"""Uniform square lattices on [-ell, ell]^n.

Node indices are 0-based internally. Documentation and reports that follow the
reference index formulas (``x_i = -ell + (i-1)h``) use 1-based indices; convert
with :meth:`Grid.one_based` and :meth:`Grid.from_one_based`.
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, StrictInt, ValidationError, validator

from ..errors import GridError
from ..types import FloatArray, NodeIndex, PointLike, as_point

log = logging.getLogger(__name__)

SNAP_TOL = 1e-9
"""Distance, in index units, under which a coordinate is considered a node."""


class Grid(BaseModel):
    """Uniform lattice with ``N = 2*ell*k + 1`` nodes per axis and spacing ``1/k``."""

    n: StrictInt
    """Spatial dimension, 1 or 2."""
    ell: StrictInt
    """Half-width of the domain."""
    k: StrictInt
    """Subdivisions per unit length."""

    class Config:
        frozen = True

    @validator("n")
    def validate_dimension(cls, v: int) -> int:
        if v not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {v}")
        return v

    @validator("ell")
    def validate_ell(cls, v: int) -> int:
        # the pinned points +-1 must be interior nodes
        if v < 2:
            raise ValueError(f"ell must be >= 2, got {v}")
        return v

    @validator("k")
    def validate_k(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"k must be positive, got {v}")
        return v

    @property
    def N(self) -> int:
        return 2 * self.ell * self.k + 1

    @property
    def h(self) -> float:
        return 1.0 / self.k

    @property
    def center(self) -> int:
        """Index of the node at coordinate 0."""
        return self.ell * self.k

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def corner(self) -> Optional[NodeIndex]:
        """The node (N, N) that carries no degree of freedom (n=2 only)."""
        if self.n == 2:
            return (self.N - 1, self.N - 1)
        return None

    def coordinate(self, i: int) -> float:
        """Coordinate of the 0-based index ``i`` along one axis."""
        if not 0 <= i < self.N:
            raise GridError(f"index {i} out of range [0, {self.N})")
        return (i - self.center) / self.k

    def axis(self) -> FloatArray:
        """Coordinates of all nodes along one axis."""
        return (np.arange(self.N, dtype=np.float64) - self.center) / self.k

    def coordinates(self) -> tuple[FloatArray, ...]:
        """Node coordinate arrays, ``indexing="ij"`` (row i <-> x_i)."""
        ax = self.axis()
        if self.n == 1:
            return (ax,)
        return tuple(np.meshgrid(ax, ax, indexing="ij"))

    def node_point(self, index: NodeIndex) -> FloatArray:
        self._check_index(index)
        return np.array([self.coordinate(i) for i in index])

    def index_of(self, point: PointLike) -> NodeIndex:
        """Node index of a point that lies on the lattice."""
        x = as_point(point)
        if x.shape != (self.n,):
            raise GridError(f"expected a {self.n}D point, got {tuple(x)}")
        t = (x + self.ell) * self.k
        idx = np.rint(t)
        if np.any(np.abs(t - idx) > SNAP_TOL):
            raise GridError(f"point {tuple(x)} is not a grid node")
        index = tuple(int(i) for i in idx)
        self._check_index(index)
        return index

    def one_based(self, index: NodeIndex) -> NodeIndex:
        """1-based index used by the reference formulas."""
        self._check_index(index)
        return tuple(i + 1 for i in index)

    def from_one_based(self, index: NodeIndex) -> NodeIndex:
        out = tuple(i - 1 for i in index)
        self._check_index(out)
        return out

    def dof_mask(self) -> np.ndarray:
        """Boolean mask of nodes that are degrees of freedom."""
        mask = np.ones(self.shape, dtype=bool)
        if self.corner is not None:
            mask[self.corner] = False
        return mask

    def distance_power(self, offset: tuple[int, ...], alpha: float) -> float:
        """``|x - y|^alpha`` for two nodes separated by ``offset`` index steps."""
        return (self.h * math.hypot(*offset)) ** alpha

    def _check_index(self, index: NodeIndex) -> None:
        if len(index) != self.n or any(not 0 <= i < self.N for i in index):
            raise GridError(f"node index {index} invalid for grid of shape {self.shape}")


def make_grid(n: int, ell: int, k: int) -> Grid:
    """Build a validated grid."""
    try:
        grid = Grid(n=n, ell=ell, k=k)
    except ValidationError as e:
        raise GridError(str(e)) from e
    log.debug(f"grid n={n} ell={ell} k={k} N={grid.N}")
    return grid
