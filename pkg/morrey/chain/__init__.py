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
"""Finite chains of points avoiding a ball."""

from .geometry import (
    chain_equal_norm,
    chain_general_2d,
    chain_nd,
    chain_on_circle,
    finite_chain,
    random_rotation,
    theta,
    verify_chain,
)
from .schema import Ball, Chain, ChainFragment, ChainVerification

__all__ = [
    "Ball",
    "Chain",
    "ChainFragment",
    "ChainVerification",
    "chain_equal_norm",
    "chain_general_2d",
    "chain_nd",
    "chain_on_circle",
    "finite_chain",
    "random_rotation",
    "theta",
    "verify_chain",
]
