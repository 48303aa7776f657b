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
"""Numerical checks of the qualitative properties of extremals."""

from .holder import c_star_trend, holder_seminorm, ratio_at_constraints, sharp_constant_estimate
from .properties import (
    check_cylindrical_symmetry,
    check_midplane_gradient_sign,
    check_nonvanishing_gradient,
    check_pointwise_bounds,
    check_reflection_antisymmetry,
    morrey_estimate_gap,
    run_property_suite,
)
from .quasiconcavity import check_quasiconcavity
from .schema import (
    GapReport,
    HolderReport,
    PropertyEntry,
    PropertyReport,
    ReportLine,
    SingularFit,
    StabilityReport,
)
from .singular import dirac_weight_from_energy, fit_singular_exponent
from .transform import (
    ExtremalEvaluator,
    check_stability,
    smooth_perturbation,
    transform_extremal,
)

__all__ = [
    "ExtremalEvaluator",
    "GapReport",
    "HolderReport",
    "PropertyEntry",
    "PropertyReport",
    "ReportLine",
    "SingularFit",
    "StabilityReport",
    "c_star_trend",
    "check_cylindrical_symmetry",
    "check_midplane_gradient_sign",
    "check_nonvanishing_gradient",
    "check_pointwise_bounds",
    "check_quasiconcavity",
    "check_reflection_antisymmetry",
    "check_stability",
    "dirac_weight_from_energy",
    "fit_singular_exponent",
    "holder_seminorm",
    "morrey_estimate_gap",
    "ratio_at_constraints",
    "run_property_suite",
    "sharp_constant_estimate",
    "smooth_perturbation",
    "transform_extremal",
]
