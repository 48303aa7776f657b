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
"""Power-law growth of an extremal near a pinned node.

Near a point mass of its p-Laplacian an extremal behaves like
``u(x0) - u(x) ~ gamma * |x - x0|^((p-n)/(p-1))``. The exponent and gamma are
recovered from circle averages of the interpolated field. The fit works on
the slopes between consecutive radii, so a constant offset between the
discrete peak value and the continuum profile drops out.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from ..energy import EnergyParams, physical_dirichlet_norm
from ..errors import AnalysisError, GridError
from ..field import ConstraintSet, ScalarField, interpolate_many
from ..types import PointLike, as_point
from .schema import SingularFit

log = logging.getLogger(__name__)

N_RADII = 6
MIN_RADII = 4
N_ANGLES = 64
EXPONENT_BOUNDS = (1e-3, 2.0)


def singular_exponent(n: int, p: float) -> float:
    return (p - n) / (p - 1.0)


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def default_radii(field: ScalarField, center: PointLike,
                  other: Optional[PointLike] = None) -> list[float]:
    """Geometric ladder from ``r_max`` down to ``2h``.

    ``r_max = min(max(0.5, 4h), dist/2, boundary_dist - h)`` where ``dist`` is
    the distance to the other singular point.
    """
    grid = field.grid
    c = as_point(center)
    r_min = 2.0 * grid.h
    r_max = min(max(0.5, 4.0 * grid.h), grid.ell - float(np.max(np.abs(c))) - grid.h)
    if other is not None:
        r_max = min(r_max, 0.5 * float(np.linalg.norm(as_point(other) - c)))
    if r_max <= r_min:
        raise AnalysisError(f"no room for radii between {r_min} and {r_max} around {tuple(c)}")
    return list(np.geomspace(r_max, r_min, N_RADII))


def _power_slopes(radii: np.ndarray, exponent: float) -> np.ndarray:
    """Slopes of ``r**exponent`` between consecutive radii."""
    a, b = radii[:-1], radii[1:]
    return (a ** exponent - b ** exponent) / (a - b)


def circle_points(center: np.ndarray, r: float, n_angles: int) -> np.ndarray:
    if center.size == 1:
        return np.array([[center[0] - r], [center[0] + r]])
    theta = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    return center + r * np.column_stack([np.cos(theta), np.sin(theta)])


def fit_singular_exponent(field: ScalarField,
                          center: PointLike,
                          params: EnergyParams,
                          radii: Optional[Sequence[float]] = None,
                          other: Optional[PointLike] = None,
                          n_angles: int = N_ANGLES) -> SingularFit:
    """Fit ``u(c) - mean(u on |x-c| = r) = gamma * r**exponent + const``.

    The slopes of the circle averages between consecutive radii are matched
    in log scale against those of ``gamma * r**exponent``; gamma is profiled
    out and the exponent found by a bounded scalar search.

    Args:
        center: a grid node, normally the pinned maximum.
        radii: strictly decreasing sample radii, :func:`default_radii` if None.
        other: the other singular point, bounding the default radii.
    """
    grid = field.grid
    params.check(grid)
    c = as_point(center)
    try:
        index = grid.index_of(c)
    except GridError as e:
        raise AnalysisError(f"center must be a grid node: {e}") from e
    c = grid.node_point(index)

    radii = list(radii) if radii is not None else default_radii(field, c, other)
    if len(radii) < MIN_RADII:
        raise AnalysisError(f"need at least {MIN_RADII} radii, got {len(radii)}")
    if any(b >= a for a, b in zip(radii, radii[1:])) or radii[-1] <= 0:
        raise AnalysisError(f"radii must be positive and strictly decreasing: {radii}")

    top = field.values[index]
    drops = []
    for radius in radii:
        values = interpolate_many(field, circle_points(c, radius, n_angles))
        drop = top - values
        if np.any(drop <= 0):
            raise AnalysisError(f"field is not locally maximal at {tuple(c)} (radius {radius:g})")
        drops.append(float(drop.mean()))

    r = np.asarray(radii, dtype=np.float64)
    d = np.asarray(drops)
    slopes = (d[:-1] - d[1:]) / (r[:-1] - r[1:])
    if np.any(slopes <= 0):
        raise AnalysisError(f"circle averages around {tuple(c)} do not decrease with the radius")
    log_s = np.log(slopes)

    def misfit(exponent: float) -> np.ndarray:
        return log_s - np.log(_power_slopes(r, exponent))

    opt = minimize_scalar(lambda e: float(np.var(misfit(e))), bounds=EXPONENT_BOUNDS,
                          method="bounded", options={"xatol": 1e-10})
    exponent = float(opt.x)
    res = misfit(exponent)
    gamma = float(np.exp(res.mean()))
    residual = float(res.std())

    n, p = grid.n, params.p
    expected = singular_exponent(n, p)
    gamma_fixed = float(np.exp(misfit(expected).mean()))
    weight = n * unit_ball_volume(n) * (expected * gamma_fixed) ** (p - 1.0)
    log.info(f"singular fit at {tuple(c)}: exponent {exponent:.4f} (expected {expected:.4f}), "
             f"gamma {gamma:.4f}")
    return SingularFit(center=tuple(float(x) for x in c),
                       radii=[float(x) for x in radii],
                       exponent=exponent,
                       gamma=gamma,
                       residual=residual,
                       expected_exponent=expected,
                       gamma_at_expected=gamma_fixed,
                       dirac_weight=weight)


def dirac_weight_from_energy(field: ScalarField,
                             params: EnergyParams,
                             constraints: ConstraintSet) -> float:
    """Point-mass weight ``||Du||^p / |alpha - beta|`` implied by the weak equation."""
    spread = abs(constraints.high.value - constraints.low.value)
    return physical_dirichlet_norm(field, params) ** params.p / spread
