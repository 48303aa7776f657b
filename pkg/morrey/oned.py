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
"""Closed-form one-dimensional extremal, used as ground truth for the pipeline."""

import logging
from typing import Union

import numpy as np

from .errors import AnalysisError
from .field import Grid, ScalarField
from .types import FloatArray

log = logging.getLogger(__name__)

Real = Union[float, FloatArray]


def exact_extremal_1d(x: Real) -> Real:
    """-1 left of -1, identity on [-1, 1], 1 right of 1."""
    out = np.clip(x, -1.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def exact_sharp_constant_1d() -> float:
    return 1.0


def exact_seminorm_1d(p: float) -> float:
    """Hölder seminorm of the clamp for the exponent ``1 - 1/p``."""
    return 2.0 ** (1.0 / p)


def exact_dirichlet_norm_1d(p: float) -> float:
    """``(∫|u'|^p)^(1/p)`` of the clamp."""
    return 2.0 ** (1.0 / p)


def sample_extremal_1d(grid: Grid) -> ScalarField:
    if grid.n != 1:
        raise AnalysisError(f"the 1D extremal needs a 1D grid, got n={grid.n}")
    return ScalarField.from_function(grid, exact_extremal_1d)


def clamp_plus_bump(grid: Grid, center: float, radius: float, height: float) -> ScalarField:
    """The clamp plus a smooth bump supported in ``|x - center| < radius``."""
    if radius <= 0:
        raise AnalysisError(f"bump radius must be positive, got {radius}")

    def fn(x: FloatArray) -> FloatArray:
        s = (x - center) / radius
        inside = np.abs(s) < 1.0
        bump = np.zeros_like(x)
        bump[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return np.clip(x, -1.0, 1.0) + height * bump

    return ScalarField.from_function(grid, fn)


def holder_ratio_integral_bound(xs: FloatArray, us: FloatArray,
                                x: float, y: float, p: float) -> tuple[float, float]:
    """Hölder ratio of ``u`` between ``y < x`` and the bound ``(∫_y^x |u'|^p)^(1/p)``.

    ``xs``/``us`` sample u; both endpoints must be sample points. The integral
    is evaluated exactly for the piecewise-linear interpolant of the samples.

    Returns:
        (ratio, bound), with ``ratio <= bound`` up to round-off.
    """
    if not y < x:
        raise AnalysisError(f"expected y < x, got y={y}, x={x}")
    if p <= 1:
        raise AnalysisError(f"p must exceed 1, got {p}")
    xs = np.asarray(xs, dtype=np.float64)
    us = np.asarray(us, dtype=np.float64)
    if xs.shape != us.shape or xs.ndim != 1:
        raise AnalysisError("sample coordinates and values must be 1D arrays of equal length")
    order = np.argsort(xs, kind="stable")
    xs, us = xs[order], us[order]
    if np.any(np.diff(xs) <= 0):
        raise AnalysisError("sample coordinates must be distinct")

    window = (xs >= y) & (xs <= x)
    xw, uw = xs[window], us[window]
    if xw.size < 2 or xw[0] != y or xw[-1] != x:
        raise AnalysisError(f"samples do not cover [{y}, {x}] with both endpoints")

    ratio = abs(uw[-1] - uw[0]) / (x - y) ** (1.0 - 1.0 / p)
    dx = np.diff(xw)
    du = np.abs(np.diff(uw))
    bound = float(np.sum(du ** p / dx ** (p - 1.0))) ** (1.0 / p)
    if ratio > bound * (1.0 + 1e-12) + 1e-300:
        raise AnalysisError(f"ratio {ratio!r} exceeds integral bound {bound!r}")
    return float(ratio), bound
