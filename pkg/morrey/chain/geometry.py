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
"""Finite chains outside a ball.

Any two points outside ``B_{2R}(0)`` can be joined by at most eight
intermediate points so that each hop is no longer than ``|x - y|`` and the
ball spanned by each hop stays outside ``B_R(0)``. The construction walks
along a circle with hops of fixed length, then jumps radially.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..errors import ChainError
from ..types import FloatArray, PointLike, as_point
from .schema import MAX_POINTS, Chain, ChainFragment, ChainVerification

log = logging.getLogger(__name__)

NORM_RTOL = 1e-9
SLACK = 1e-12


def theta(a: float) -> float:
    """Apex angle of the isosceles triangle with legs ``1 + a`` and base ``a``."""
    if not a > 0:
        raise ChainError(f"a must be positive, got {a}")
    r = a / (1.0 + a)
    return math.acos(1.0 - 0.5 * r * r)


def _check_norm(v: FloatArray, expected: float, what: str) -> None:
    if abs(np.linalg.norm(v) - expected) > NORM_RTOL * max(1.0, expected):
        raise ChainError(f"|{what}| = {np.linalg.norm(v)!r}, expected {expected!r}")


def _as_2d(v: PointLike, what: str) -> FloatArray:
    p = as_point(v)
    if p.shape != (2,):
        raise ChainError(f"{what} must be a 2D point, got {tuple(p)}")
    return p


def chain_on_circle(x: PointLike, y: PointLike, a: float) -> ChainFragment:
    """Points on the circle of radius ``1 + a`` stepping from ``x`` towards ``y``.

    Consecutive points, starting from ``x``, are ``a`` apart and the last one
    is within ``a`` of ``y``. At most 7 points are needed since
    ``7 theta(a) > pi`` for ``a >= 1``.
    """
    x, y = _as_2d(x, "x"), _as_2d(y, "y")
    if a < 1:
        raise ChainError(f"a must be >= 1, got {a}")
    _check_norm(x, 1.0 + a, "x")
    _check_norm(y, 1.0 + a, "y")
    if np.linalg.norm(y - x) <= a:
        raise ChainError(f"|y - x| = {np.linalg.norm(y - x)!r} <= a = {a!r}, use a single hop")

    X, Y = complex(*x), complex(*y)
    # angle of y seen from x; negative angles are the reflected case
    phi = np.angle(Y / X)
    sign = 1.0 if phi > 0 else -1.0
    th = theta(a)
    m = max(1, math.ceil(abs(phi) / th))
    points = []
    for j in range(1, m + 1):
        z = X * np.exp(1j * sign * j * th)
        points.append(np.array([z.real, z.imag]))
    return ChainFragment(points)


def chain_equal_norm(x: PointLike, y: PointLike, t: float, s: float) -> ChainFragment:
    """Circle chain on ``|z| = t + s`` with hops of length ``s``."""
    x, y = _as_2d(x, "x"), _as_2d(y, "y")
    if not s >= t > 0:
        raise ChainError(f"expected s >= t > 0, got t={t}, s={s}")
    _check_norm(x, t + s, "x")
    _check_norm(y, t + s, "y")
    fragment = chain_on_circle(x / t, y / t, s / t)
    return ChainFragment([t * z for z in fragment.points])


def chain_general_2d(x: PointLike, y: PointLike, t: float, s: float) -> Chain:
    """Walk the circle through ``x`` to ``|x| y/|y|``, then hop radially to ``y``."""
    x, y = _as_2d(x, "x"), _as_2d(y, "y")
    nx, ny = float(np.linalg.norm(x)), float(np.linalg.norm(y))
    _check_norm(x, t + s, "x")
    if ny < nx * (1.0 - NORM_RTOL):
        raise ChainError(f"expected |y| >= |x|, got |y|={ny!r} < |x|={nx!r}")
    target = nx * y / ny
    fragment = chain_equal_norm(x, target, t, s)
    return Chain(x, y, [*fragment.points, target], t)


def _plane_basis(x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Orthonormal pair spanning a plane through ``x`` and ``y``, pivoting on ``y``."""
    e1 = y / np.linalg.norm(y)
    r = x - (x @ e1) * e1
    if np.linalg.norm(r) <= NORM_RTOL * np.linalg.norm(x):
        # antipodal pair: any plane containing the line works
        axis = np.zeros_like(e1)
        axis[int(np.argmin(np.abs(e1)))] = 1.0
        r = axis - (axis @ e1) * e1
    return e1, r / np.linalg.norm(r)


def chain_nd(x: PointLike, y: PointLike, t: float, s: float) -> Chain:
    """:func:`chain_general_2d` carried out in a plane through x and y."""
    x, y = as_point(x), as_point(y)
    if x.shape != y.shape or x.size < 2:
        raise ChainError("x and y must be points of the same dimension >= 2")
    if x.size == 2:
        return chain_general_2d(x, y, t, s)
    e1, e2 = _plane_basis(x, y)
    x2 = np.array([x @ e1, x @ e2])
    y2 = np.array([float(np.linalg.norm(y)), 0.0])
    flat = chain_general_2d(x2, y2, t, s)
    points = [z[0] * e1 + z[1] * e2 for z in flat.points]
    return Chain(x, y, points, t)


def finite_chain(x: PointLike, y: PointLike, R: float) -> Chain:
    """Chain of at most 8 points from ``x`` to ``y`` whose hop balls avoid ``B_R(0)``."""
    x, y = as_point(x), as_point(y)
    if x.shape != y.shape or x.size < 2:
        raise ChainError("x and y must be points of the same dimension >= 2")
    if not R > 0:
        raise ChainError(f"R must be positive, got {R}")
    for name, v in (("x", x), ("y", y)):
        if np.linalg.norm(v) < 2.0 * R * (1.0 - NORM_RTOL):
            raise ChainError(f"|{name}| = {np.linalg.norm(v)!r} < 2R = {2.0 * R!r}")
    if np.array_equal(x, y):
        raise ChainError("x and y coincide")

    swapped = np.linalg.norm(y) < np.linalg.norm(x)
    a, b = (y, x) if swapped else (x, y)
    na = float(np.linalg.norm(a))
    S = max(na - R, R)
    target = na * b / np.linalg.norm(b)
    if np.linalg.norm(target - a) <= S:
        points = [target]
    else:
        points = chain_nd(a, b, R, S).points
    if swapped:
        points = points[::-1]
    chain = Chain(x, y, points, R)
    log.debug(f"finite chain with m={chain.m} for |x|={np.linalg.norm(x):.4g}, "
              f"|y|={np.linalg.norm(y):.4g}, R={R:.4g}")
    return chain


def verify_chain(chain: Chain, slack: float = SLACK) -> ChainVerification:
    """Check the length, hop-distance and ball-inclusion conclusions."""
    span = float(np.linalg.norm(chain.y - chain.x))
    distances = chain.distances()
    balls = chain.balls
    dist_tol = span + slack * max(1.0, span)
    ball_tol = chain.R - slack * max(1.0, chain.R)
    return ChainVerification(
        m=chain.m,
        length_ok=1 <= chain.m <= MAX_POINTS,
        distances_ok=[d <= dist_tol for d in distances],
        balls_ok=[b.clearance >= ball_tol for b in balls],
        max_distance_ratio=max(distances) / span if span > 0 else math.inf,
        min_clearance=min(b.clearance for b in balls),
    )


def random_rotation(n: int, rng: Optional[np.random.Generator] = None) -> FloatArray:
    """Uniformly random rotation matrix."""
    rng = rng or np.random.default_rng()
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
