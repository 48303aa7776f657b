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
"""Level-set polylines of 2D fields by marching squares.

Output format, one block per level::

    # morrey contours n=2 ell=<ell> k=<k>
    level <t> <count>
    polyline <i> <npts> <open|closed>
    <x> <y>
    ...

Nodes with ``u >= t`` count as inside the superlevel set. A level that is
never crossed yields ``level <t> 0``.
"""

import logging
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Union

import numpy as np

from ..errors import FieldError
from ..field import ScalarField, completed_values
from ..types import FloatArray

log = logging.getLogger(__name__)

EdgeKey = tuple[int, int, int]
"""``(axis, i, j)``: the grid edge leaving node ``(i, j)`` along ``axis``."""


class Polyline(NamedTuple):
    points: FloatArray
    """``(m, 2)`` vertex coordinates in walking order."""
    closed: bool


class ContourLevel(NamedTuple):
    level: float
    polylines: list[Polyline]


def _cell_segments(above: np.ndarray, v: FloatArray, i: int, j: int,
                   level: float) -> list[tuple[EdgeKey, EdgeKey]]:
    a, b = above[i, j], above[i + 1, j]
    c, d = above[i + 1, j + 1], above[i, j + 1]
    bottom, right = (0, i, j), (1, i + 1, j)
    top, left = (0, i, j + 1), (1, i, j)
    crossed = [e for e, hit in ((bottom, a != b), (right, b != c),
                                (top, c != d), (left, d != a)) if hit]
    if len(crossed) == 2:
        return [(crossed[0], crossed[1])]
    if len(crossed) != 4:
        return []
    # saddle: the cell centre decides which diagonal is connected
    centre = 0.25 * (v[i, j] + v[i + 1, j] + v[i + 1, j + 1] + v[i, j + 1])
    if (centre >= level) == bool(a):
        return [(bottom, right), (top, left)]
    return [(bottom, left), (right, top)]


def _edge_point(key: EdgeKey, v: FloatArray, axis: FloatArray, level: float) -> FloatArray:
    ax, i, j = key
    i1, j1 = (i + 1, j) if ax == 0 else (i, j + 1)
    v0, v1 = v[i, j], v[i1, j1]
    s = (level - v0) / (v1 - v0)
    p0 = np.array([axis[i], axis[j]])
    p1 = np.array([axis[i1], axis[j1]])
    return p0 + s * (p1 - p0)


def _stitch(segments: list[tuple[EdgeKey, EdgeKey]]) -> list[tuple[list[EdgeKey], bool]]:
    adjacency: dict[EdgeKey, list[int]] = {}
    for s, (e0, e1) in enumerate(segments):
        adjacency.setdefault(e0, []).append(s)
        adjacency.setdefault(e1, []).append(s)
    used = [False] * len(segments)

    def walk(start: EdgeKey) -> list[EdgeKey]:
        path = [start]
        cur = start
        while True:
            nxt = next((s for s in adjacency[cur] if not used[s]), None)
            if nxt is None:
                return path
            used[nxt] = True
            e0, e1 = segments[nxt]
            cur = e1 if e0 == cur else e0
            path.append(cur)

    lines = []
    for key in sorted(k for k, segs in adjacency.items() if len(segs) == 1):
        if not used[adjacency[key][0]]:
            lines.append((walk(key), False))
    for s, (e0, _) in enumerate(segments):
        if not used[s]:
            path = walk(e0)
            # the start is revisited at the end of a loop
            lines.append((path[:-1], True))
    return lines


def extract_contours(field: ScalarField, level: float) -> list[Polyline]:
    """Polylines of ``{u = level}`` through the grid cells."""
    grid = field.grid
    if grid.n != 2:
        raise FieldError(f"contours need a 2D field, got n={grid.n}")
    v = completed_values(field)
    axis = grid.axis()
    above = v >= level
    segments = []
    for i in range(grid.N - 1):
        for j in range(grid.N - 1):
            segments.extend(_cell_segments(above, v, i, j, level))
    polylines = []
    for keys, closed in _stitch(segments):
        pts = np.array([_edge_point(key, v, axis, level) for key in keys])
        polylines.append(Polyline(pts, closed))
    return polylines


def format_contours(field: ScalarField, contours: list[ContourLevel]) -> str:
    grid = field.grid
    lines = [f"# morrey contours n={grid.n} ell={grid.ell} k={grid.k}"]
    for c in contours:
        lines.append(f"level {c.level!r} {len(c.polylines)}")
        for i, line in enumerate(c.polylines):
            kind = "closed" if line.closed else "open"
            lines.append(f"polyline {i} {len(line.points)} {kind}")
            lines.extend(f"{x:.17g} {y:.17g}" for x, y in line.points)
    return "\n".join(lines) + "\n"


def emit_contours(field: ScalarField,
                  levels: Iterable[float],
                  destination: Optional[Union[str, Path]] = None) -> list[ContourLevel]:
    """Extract every level and write them to ``destination`` if given."""
    contours = []
    for t in levels:
        polylines = extract_contours(field, float(t))
        if not polylines:
            log.warning(f"contour level {t:g} is empty")
        contours.append(ContourLevel(float(t), polylines))
    if destination is not None:
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_contours(field, contours), encoding="utf-8")
        log.debug(f"contours written to {path}")
    return contours
