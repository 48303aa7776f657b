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
"""Symmetry, sign and bound checks of computed extremals.

The checks assume the canonical configuration: u = 1 at (0, 1), u = -1 at
(0, -1), so the midplane is y = 0 and the midvalue is 0.
"""

import logging
from typing import Iterable, Optional

import numpy as np

from ..energy import EnergyParams, cell_energies
from ..errors import AnalysisError
from ..field import ConstraintSet, Grid, ScalarField
from ..types import FloatArray
from .quasiconcavity import check_quasiconcavity
from .schema import GapReport, PropertyEntry, PropertyReport

log = logging.getLogger(__name__)

BOUNDS_TOL = 1e-6
SYMMETRY_RTOL = 1e-3
"""Symmetry residual tolerance relative to the seminorm."""


def _dof_values(field: ScalarField) -> np.ma.MaskedArray:
    return np.ma.masked_array(field.values, mask=~field.grid.dof_mask())


def _require_2d(grid: Grid, what: str) -> None:
    if grid.n != 2:
        raise AnalysisError(f"{what} needs a 2D grid, got n={grid.n}")


def check_reflection_antisymmetry(field: ScalarField) -> float:
    """``max |u(x, -y) + u(x, y)|`` over node pairs mirrored across y = 0."""
    grid = field.grid
    if grid.n == 1:
        v = field.values
        return float(np.max(np.abs(v + v[::-1])))
    u = _dof_values(field)
    # mirror j -> N-1-j
    res = np.abs(u + u[:, ::-1])
    return float(res.max()) if res.count() else 0.0


def check_cylindrical_symmetry(field: ScalarField) -> float:
    """``max |u(-x, y) - u(x, y)|``, the planar form of symmetry about the axis."""
    grid = field.grid
    _require_2d(grid, "cylindrical symmetry")
    u = _dof_values(field)
    # mirror i -> N-1-i
    res = np.abs(u - u[::-1, :])
    return float(res.max()) if res.count() else 0.0


def _half_masks(field: ScalarField, constraints: ConstraintSet) -> tuple[np.ndarray, np.ndarray]:
    """Nodes strictly above / below the bisector of the pinned nodes, pins excluded."""
    grid = field.grid
    hi = constraints.point(constraints.high)
    lo = constraints.point(constraints.low)
    mid = 0.5 * (hi + lo)
    coords = grid.coordinates()
    side = sum((c - m) * d for c, m, d in zip(coords, mid, hi - lo))
    keep = grid.dof_mask() & ~constraints.mask()
    return keep & (side > 0), keep & (side < 0)


def _max_or_zero(a: FloatArray) -> float:
    return float(a.max()) if a.size else 0.0


def check_pointwise_bounds(field: ScalarField, constraints: ConstraintSet,
                           tol: float = BOUNDS_TOL) -> PropertyEntry:
    """Overshoots of ``beta <= u <= alpha`` and of the strict half-space bounds."""
    alpha, beta = constraints.high.value, constraints.low.value
    mid = 0.5 * (alpha + beta)
    v = field.values
    dof = field.grid.dof_mask()
    upper, lower = _half_masks(field, constraints)

    global_v = _max_or_zero(np.maximum(np.maximum(v[dof] - alpha, beta - v[dof]), 0.0))
    vu, vl = v[upper], v[lower]
    upper_v = _max_or_zero(np.maximum(np.maximum(mid - vu, vu - alpha), 0.0))
    lower_v = _max_or_zero(np.maximum(np.maximum(vl - mid, beta - vl), 0.0))
    value = max(global_v, upper_v, lower_v)
    if value > tol:
        log.warning(f"pointwise bounds violated by {value:.3e}")
    return PropertyEntry.at_most("bounds", value, tol, details={
        "global": global_v,
        "upper_half": upper_v,
        "lower_half": lower_v,
    })


def check_midplane_gradient_sign(field: ScalarField, tol: float = 0.0) -> PropertyEntry:
    """Central difference ``du/dy`` on interior midplane nodes must be positive."""
    grid = field.grid
    _require_2d(grid, "midplane gradient")
    c = grid.center
    v = field.values
    dudy = (v[1:-1, c + 1] - v[1:-1, c - 1]) / (2.0 * grid.h)
    bad = dudy[dudy <= 0]
    magnitude = float(np.max(-bad)) if bad.size else 0.0
    entry = PropertyEntry(name="midplane_gradient", value=magnitude, tolerance=tol,
                          passed=bad.size == 0,
                          details={"violations": float(bad.size),
                                   "min_dudy": float(dudy.min())})
    if not entry.passed:
        log.warning(f"du/dy <= 0 at {bad.size} midplane nodes")
    return entry


def central_gradient_norm(field: ScalarField) -> FloatArray:
    """Central-difference ``|Du|`` at interior nodes (NaN on the boundary)."""
    grid = field.grid
    v = field.values
    out = np.full(grid.shape, np.nan)
    two_h = 2.0 * grid.h
    if grid.n == 1:
        out[1:-1] = np.abs(v[2:] - v[:-2]) / two_h
        return out
    gx = (v[2:, 1:-1] - v[:-2, 1:-1]) / two_h
    gy = (v[1:-1, 2:] - v[1:-1, :-2]) / two_h
    out[1:-1, 1:-1] = np.hypot(gx, gy)
    return out


def check_nonvanishing_gradient(field: ScalarField,
                                constraints: Optional[ConstraintSet] = None,
                                threshold: float = 0.0) -> PropertyEntry:
    """Smallest ``|Du|`` away from the pinned nodes."""
    grid = field.grid
    g = central_gradient_norm(field)
    keep = ~np.isnan(g)
    if constraints is not None:
        coords = grid.coordinates()
        for e in constraints.entries:
            p = constraints.point(e)
            dist = np.sqrt(sum((c - x) ** 2 for c, x in zip(coords, p)))
            keep &= dist > 2.0 * grid.h + 1e-12
    vals = g[keep]
    if vals.size == 0:
        raise AnalysisError("no interior nodes left to check")
    minimum = float(vals.min())
    degenerate = minimum == 0.0
    if degenerate:
        log.warning("gradient vanishes at some interior node")
    return PropertyEntry.above("nonvanishing_gradient", minimum, threshold,
                               degenerate=degenerate)


def morrey_estimate_gap(field: ScalarField,
                        params: EnergyParams,
                        constraints: Optional[ConstraintSet] = None,
                        radius: float = 1.0) -> GapReport:
    """Fraction of the Dirichlet energy whose stencils sit outside a ball.

    The ball is centred at the midpoint of the pinned nodes (the origin when
    no constraints are given).
    """
    grid = field.grid
    params.check(grid)
    terms = cell_energies(field.values, grid.n, params.p)
    center = constraints.midpoint() if constraints is not None else np.zeros(grid.n)
    # stencil terms are indexed by their base node
    base = tuple(c[tuple(slice(0, -1) for _ in range(grid.n))] for c in grid.coordinates())
    dist = np.sqrt(sum((c - x) ** 2 for c, x in zip(base, center)))
    total = float(terms.sum())
    outside = float(terms[dist > radius].sum())
    if total == 0.0:
        log.warning("field has zero energy, gap fraction undefined")
        return GapReport(fraction_outside=None, energy_outside=0.0, energy_total=0.0,
                         center=tuple(center), radius=radius, degenerate=True)
    return GapReport(fraction_outside=outside / total, energy_outside=outside,
                     energy_total=total, center=tuple(center), radius=radius)


def run_property_suite(field: ScalarField,
                       params: EnergyParams,
                       constraints: ConstraintSet,
                       checks: Iterable[str],
                       seminorm: Optional[float] = None,
                       levels: Optional[list[float]] = None,
                       gradient_threshold: float = 0.0) -> PropertyReport:
    """Run the named checks and collect their verdicts in one report.

    Known names: ``symmetry``, ``bounds``, ``quasiconcavity``, ``midplane``,
    ``gradient``. Symmetry tolerances scale with ``seminorm``.
    """
    checks = set(checks)
    report = PropertyReport()
    sym_tol = SYMMETRY_RTOL * (seminorm if seminorm is not None else 1.0)

    if "symmetry" in checks:
        report.add(PropertyEntry.at_most("antisymmetry",
                                         check_reflection_antisymmetry(field), sym_tol))
        if field.grid.n == 2:
            report.add(PropertyEntry.at_most("cylindrical_symmetry",
                                             check_cylindrical_symmetry(field), sym_tol))
    if "bounds" in checks:
        report.add(check_pointwise_bounds(field, constraints))
    if "quasiconcavity" in checks and field.grid.n == 2:
        report.add(check_quasiconcavity(field, levels or [0.2, 0.4, 0.6, 0.8], constraints))
    if "midplane" in checks and field.grid.n == 2:
        report.add(check_midplane_gradient_sign(field))
    if "gradient" in checks:
        report.add(check_nonvanishing_gradient(field, constraints, gradient_threshold))

    for name, entry in report.entries.items():
        log.info(f"{name}: {entry.value:.3e} ({'PASS' if entry.passed else 'FAIL'})")
    return report
