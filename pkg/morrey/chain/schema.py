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
"""Chains of points linking two points outside a ball."""

from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, Field

from ..types import FloatArray

MAX_POINTS = 8


class Ball(NamedTuple):
    center: FloatArray
    radius: float

    @property
    def clearance(self) -> float:
        """Distance from the origin to the ball."""
        return float(np.linalg.norm(self.center)) - self.radius


class ChainFragment(NamedTuple):
    """Intermediate points of a partial construction."""
    points: list[FloatArray]

    @property
    def m(self) -> int:
        return len(self.points)


class Chain(NamedTuple):
    """``x -> z_1 -> ... -> z_m -> y`` with every hop avoiding ``B_R(0)``."""
    x: FloatArray
    y: FloatArray
    points: list[FloatArray]
    R: float

    @property
    def m(self) -> int:
        return len(self.points)

    def path(self) -> list[FloatArray]:
        return [self.x, *self.points, self.y]

    def hops(self) -> list[tuple[FloatArray, FloatArray]]:
        path = self.path()
        return list(zip(path, path[1:]))

    def distances(self) -> list[float]:
        return [float(np.linalg.norm(b - a)) for a, b in self.hops()]

    @property
    def balls(self) -> list[Ball]:
        """``B_{r/2}((a+b)/2)`` for each hop ``a -> b`` of length ``r``."""
        return [Ball(0.5 * (a + b), 0.5 * float(np.linalg.norm(b - a))) for a, b in self.hops()]

    def to_record(self) -> str:
        """Plain-text dump of endpoints, points and balls."""

        def fmt(v: FloatArray) -> str:
            return "(" + ", ".join(repr(float(c)) for c in v) + ")"

        lines = [f"x = {fmt(self.x)}",
                 f"y = {fmt(self.y)}",
                 f"R = {self.R!r}",
                 f"m = {self.m}"]
        lines += [f"z[{i}] = {fmt(z)}" for i, z in enumerate(self.points, 1)]
        lines += [f"ball[{i}] = center {fmt(b.center)} radius {b.radius!r}"
                  for i, b in enumerate(self.balls)]
        return "\n".join(lines)


class ChainVerification(BaseModel):
    m: int
    length_ok: bool
    distances_ok: list[bool] = Field(default_factory=list)
    balls_ok: list[bool] = Field(default_factory=list)
    max_distance_ratio: float
    """Longest hop over ``|x - y|``."""
    min_clearance: float
    """Smallest ``|center| - radius`` over the balls."""

    @property
    def passed(self) -> bool:
        return self.length_ok and all(self.distances_ok) and all(self.balls_ok)

    def to_record(self) -> str:
        return "\n".join([
            f"m = {self.m} ({'PASS' if self.length_ok else 'FAIL'})",
            "distances = " + " ".join("PASS" if ok else "FAIL" for ok in self.distances_ok),
            "balls = " + " ".join("PASS" if ok else "FAIL" for ok in self.balls_ok),
            f"max_distance_ratio = {self.max_distance_ratio!r}",
            f"min_clearance = {self.min_clearance!r}",
            f"verdict = {'PASS' if self.passed else 'FAIL'}",
        ])
