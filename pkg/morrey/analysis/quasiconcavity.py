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
"""Convexity of superlevel sets, tested by convex-hull containment of grid nodes."""

import logging
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull

from ..errors import AnalysisError
from ..field import ConstraintSet, ScalarField, canonical_constraints
from ..types import FloatArray
from .schema import PropertyEntry

log = logging.getLogger(__name__)

LEVEL_RANGE = (0.1, 0.9)
QUASICONCAVITY_TOL = 1e-3


def _inside_hull(vertices: FloatArray, candidates: FloatArray, tol: float) -> np.ndarray:
    """Mask of ``candidates`` lying in the convex hull of ``vertices`` (2D)."""
    center = vertices.mean(axis=0)
    spread = vertices - center
    rank = np.linalg.matrix_rank(spread, tol=tol) if len(vertices) > 1 else 0

    if rank == 0:
        return np.all(np.abs(candidates - vertices[0]) <= tol, axis=1)
    if rank == 1 or len(vertices) < 3:
        # segment between the extreme points along the main direction
        d = spread[np.argmax(np.linalg.norm(spread, axis=1))]
        d = d / np.linalg.norm(d)
        s = spread @ d
        rel = candidates - center
        along = rel @ d
        off = np.abs(rel[:, 0] * d[1] - rel[:, 1] * d[0])
        return (off <= tol) & (along >= s.min() - tol) & (along <= s.max() + tol)

    hull = ConvexHull(vertices)
    # facet equations: normal . x + offset <= 0 inside
    signed = candidates @ hull.equations[:, :-1].T + hull.equations[:, -1]
    return np.all(signed <= tol, axis=1)


def superlevel_deficit(field: ScalarField, level: float, region: np.ndarray) -> float:
    """Worst ``level - u(q)`` over nodes ``q`` of ``region`` inside the hull of ``{u >= level}``."""
    grid = field.grid
    X, Y = grid.coordinates()
    v = field.values
    members = region & (v >= level)
    if not members.any():
        raise AnalysisError(f"empty superlevel set at level {level}")
    vertices = np.column_stack([X[members], Y[members]])
    candidates = np.column_stack([X[region], Y[region]])
    inside = _inside_hull(vertices, candidates, tol=1e-9 * grid.ell)
    deficit = level - v[region][inside]
    return float(max(deficit.max(initial=0.0), 0.0))


def check_quasiconcavity(field: ScalarField,
                         levels: list[float],
                         constraints: Optional[ConstraintSet] = None,
                         tol: float = QUASICONCAVITY_TOL) -> PropertyEntry:
    """Superlevel sets on the upper half-plane and sublevel sets on the lower one must be convex.

    ``levels`` are taken in [0.1, 0.9]; the lower half-plane is tested at ``-t``.
    """
    grid = field.grid
    if grid.n != 2:
        raise AnalysisError(f"quasiconcavity needs a 2D grid, got n={grid.n}")
    if not levels:
        raise AnalysisError("at least one level is required")
    lo, hi = LEVEL_RANGE
    for t in levels:
        if not lo <= t <= hi:
            raise AnalysisError(f"level {t} outside [{lo}, {hi}]")
    constraints = constraints or canonical_constraints(grid)

    hi_pt = constraints.point(constraints.high)
    lo_pt = constraints.point(constraints.low)
    mid = 0.5 * (hi_pt + lo_pt)
    X, Y = grid.coordinates()
    side = (X - mid[0]) * (hi_pt[0] - lo_pt[0]) + (Y - mid[1]) * (hi_pt[1] - lo_pt[1])
    dof = grid.dof_mask()
    upper, lower = dof & (side > 0), dof & (side < 0)

    details = {}
    for t in levels:
        details[f"upper@{t:g}"] = superlevel_deficit(field, t, upper)
        # quasiconvexity below: superlevel sets of -u
        details[f"lower@{t:g}"] = superlevel_deficit(-field, t, lower)
    worst = max(details.values())
    if worst > tol:
        log.warning(f"level-set convexity deficit {worst:.3e} exceeds {tol:.1e}")
    return PropertyEntry.at_most("quasiconcavity", worst, tol, details=details)
