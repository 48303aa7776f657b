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
"""Extremals for arbitrary pinned data, and the stability inequality.

Every extremal is an affine image of the canonical one (u = 1 at e_n,
u = -1 at -e_n) under a similarity of the plane::

    u(x) = (a+b)/2 + (a-b)/2 * U(e_n - 2 O(x - x0) / |y0 - x0|)

with O a rotation sending (y0 - x0)/|y0 - x0| to e_n.
"""

import logging
from typing import Optional

import numpy as np

from ..energy import EnergyParams, physical_dirichlet_norm
from ..errors import AnalysisError, FieldError
from ..field import ConstraintSet, Grid, ScalarField, canonical_constraints, interpolate_many
from ..oned import exact_sharp_constant_1d
from ..types import FloatArray, PointLike, as_point
from .holder import holder_seminorm, sharp_constant_estimate
from .schema import StabilityReport

log = logging.getLogger(__name__)


def rotation_to_axis(d: FloatArray) -> FloatArray:
    """Rotation (reflection when n=1) sending the unit vector ``d`` to ``e_n``."""
    if d.size == 1:
        return np.array([[d[0]]])
    return np.array([[d[1], -d[0]],
                     [d[0], d[1]]])


class ExtremalEvaluator:
    """Point evaluator of the extremal with ``u(x0) = alpha`` and ``u(y0) = beta``."""

    def __init__(self, canonical: ScalarField, x0: PointLike, y0: PointLike,
                 alpha: float, beta: float):
        grid = canonical.grid
        self.canonical = canonical
        self.x0 = as_point(x0)
        self.y0 = as_point(y0)
        if self.x0.shape != (grid.n,) or self.y0.shape != (grid.n,):
            raise AnalysisError(f"x0 and y0 must be {grid.n}D points")
        dist = float(np.linalg.norm(self.y0 - self.x0))
        if dist == 0.0:
            raise AnalysisError(f"x0 and y0 coincide at {tuple(self.x0)}")
        if alpha == beta:
            raise AnalysisError(f"alpha and beta must differ, both are {alpha}")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.scale = 2.0 / dist
        self.rotation = rotation_to_axis((self.y0 - self.x0) / dist)
        cons = canonical_constraints(grid)
        self.anchor = cons.point(cons.high)

    def canonical_points(self, points: FloatArray) -> FloatArray:
        """Preimages in the canonical domain of the rows of ``points``."""
        rel = np.atleast_2d(points) - self.x0
        return self.anchor - self.scale * rel @ self.rotation.T

    def evaluate(self, points: FloatArray) -> FloatArray:
        q = self.canonical_points(points)
        try:
            U = interpolate_many(self.canonical, q)
        except FieldError as e:
            raise AnalysisError(f"evaluation point maps outside the canonical domain: {e}") from e
        return 0.5 * (self.alpha + self.beta) + 0.5 * (self.alpha - self.beta) * U

    def __call__(self, point: PointLike) -> float:
        return float(self.evaluate(as_point(point)[None, :])[0])

    def sample(self, grid: Grid) -> ScalarField:
        """Values at every degree-of-freedom node of ``grid``."""
        pts = np.column_stack([c.ravel() for c in grid.coordinates()])
        dof = grid.dof_mask().ravel()
        values = np.zeros(pts.shape[0])
        values[dof] = self.evaluate(pts[dof])
        return ScalarField(grid, values.reshape(grid.shape), copy=False)


def transform_extremal(canonical_field: ScalarField, x0: PointLike, y0: PointLike,
                       alpha: float, beta: float) -> ExtremalEvaluator:
    return ExtremalEvaluator(canonical_field, x0, y0, alpha, beta)


def check_stability(test_field: ScalarField,
                    params: EnergyParams,
                    canonical_field: ScalarField,
                    c_star: Optional[float] = None,
                    mode: str = "auto") -> StabilityReport:
    """Evaluate both sides of the Clarkson-type stability inequality.

    For p > 2::

        (C/2)^p ||Du - Dv||^p + [v]^p <= C^p ||Dv||^p

    and for 1 < p <= 2 (n = 1 only) the same with exponent p/(p-1).
    ``u`` is the extremal through the Hölder-maximizing pair of ``v``; ``C``
    defaults to the current estimate from ``canonical_field`` (exactly 1 when n=1).
    """
    grid = test_field.grid
    params.check(grid)
    if canonical_field.grid.n != grid.n:
        raise AnalysisError("test and canonical fields differ in dimension")
    p = params.p
    if p > 2:
        exponent = p
    elif grid.n == 1:
        exponent = p / (p - 1.0)
    else:
        raise AnalysisError(f"the stability inequality needs p > 2 when n={grid.n}, got p={p}")

    report = holder_seminorm(test_field, params, mode)
    if report.degenerate or report.argmax_pair is None:
        raise AnalysisError("the test field is constant, its Hölder argmax is undefined")
    i0, j0 = report.argmax_pair
    x0, y0 = grid.node_point(i0), grid.node_point(j0)
    alpha, beta = test_field.values[i0], test_field.values[j0]

    u = transform_extremal(canonical_field, x0, y0, alpha, beta).sample(grid)

    if c_star is None:
        c_star = (exact_sharp_constant_1d() if grid.n == 1
                  else sharp_constant_estimate(canonical_field, params, mode))

    dv = physical_dirichlet_norm(test_field, params)
    ddiff = physical_dirichlet_norm(u - test_field, params)
    lhs = (0.5 * c_star * ddiff) ** exponent + report.seminorm ** exponent
    rhs = (c_star * dv) ** exponent
    slack = rhs - lhs
    log.info(f"stability: lhs={lhs:.6e} rhs={rhs:.6e} slack={slack:.3e}")
    return StabilityReport(lhs=lhs, rhs=rhs, slack=slack, c_star=c_star,
                           x0=tuple(x0), y0=tuple(y0), exponent=exponent)


def smooth_perturbation(field: ScalarField,
                        constraints: ConstraintSet,
                        amplitude: float,
                        rng: np.random.Generator,
                        modes: int = 3) -> ScalarField:
    """``field`` plus a random low-frequency wave vanishing at the pinned nodes and on x = 0."""
    grid = field.grid
    coords = grid.coordinates()
    L = 2.0 * grid.ell
    wave = np.zeros(grid.shape)
    for a in range(1, modes + 1):
        for b in range(1, modes + 1):
            c = rng.uniform(-1.0, 1.0) / (a * b)
            term = np.sin(np.pi * a * (coords[0] + grid.ell) / L)
            if grid.n == 2:
                term = term * np.sin(np.pi * b * (coords[1] + grid.ell) / L)
            elif b > 1:
                continue
            wave += c * term
    weight = coords[0] ** 2 / (1.0 + coords[0] ** 2)
    for e in constraints.entries:
        d2 = sum((x - q) ** 2 for x, q in zip(coords, constraints.point(e)))
        weight = weight * d2 / (1.0 + d2)
    scale = np.max(np.abs(wave * weight))
    if scale == 0.0:
        return field
    return field + ScalarField(grid, amplitude * wave * weight / scale, copy=False)
