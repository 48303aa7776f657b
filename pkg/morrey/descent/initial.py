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
"""Logarithmic initial guess for the canonical problem."""

import logging

import numpy as np

from ..errors import ConstraintError
from ..field import ConstraintSet, Grid, ScalarField, canonical_constraints
from ..types import FloatArray

log = logging.getLogger(__name__)

LOG_GUESS_EPS = 1e-2


def _log_profile(x: FloatArray, y: FloatArray) -> FloatArray:
    # log(a) - log(b) keeps the profile exactly odd in y
    r2 = x * x + LOG_GUESS_EPS
    return np.log(r2 + (y - 1.0) ** 2) - np.log(r2 + (y + 1.0) ** 2)


def default_initial_guess(grid: Grid, constraints: ConstraintSet) -> ScalarField:
    """Sample ``c*ln[(x^2+(y-1)^2+0.01)/(x^2+(y+1)^2+0.01)]`` with ``w(0,1) = 1``.

    For n=1 the profile is taken along the axis on [-1, 1] and extended by
    the pinned values outside.
    """
    if constraints != canonical_constraints(grid):
        raise ConstraintError("the logarithmic guess needs the canonical constraints; "
                              "supply a custom initial field")

    zero = np.zeros(1)
    c = 1.0 / float(_log_profile(zero, zero + 1.0)[0])
    log.debug(f"initial guess scale c={c!r}")

    if grid.n == 1:
        (x,) = grid.coordinates()
        inner = c * _log_profile(np.zeros_like(x), x)
        values = np.where(np.abs(x) <= 1.0, inner, np.sign(x))
    else:
        X, Y = grid.coordinates()
        values = c * _log_profile(X, Y)
    return constraints.apply(ScalarField(grid, values, copy=False))
