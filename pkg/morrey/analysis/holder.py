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
"""Discrete Hölder seminorm ``max |u(x)-u(y)| / |x-y|^(1-n/p)`` and the C* estimate."""

import logging
from typing import Optional

import numpy as np

from ..energy import EnergyParams, physical_dirichlet_norm
from ..errors import AnalysisError
from ..field import ConstraintSet, Grid, ScalarField
from ..types import FloatArray, NodeIndex
from .schema import HolderReport

log = logging.getLogger(__name__)

EXACT_MAX_N = 81
"""Largest N scanned exhaustively when ``mode="auto"``."""

DEFAULT_SAMPLES = 1_000_000

MODES = ("auto", "exact", "sampled")


def distance_table(grid: Grid, alpha: float) -> FloatArray:
    """``|x-y|^alpha`` indexed by absolute index offsets ``(|di|, |dj|)``."""
    N = grid.N
    if grid.n == 1:
        return np.array([grid.distance_power((a,), alpha) for a in range(N)])
    return np.array([[grid.distance_power((a, b), alpha) for b in range(N)]
                     for a in range(N)])


class _Best:
    """Running maximum with lexicographic tie-breaking on flat index pairs."""

    def __init__(self) -> None:
        self.value = -1.0
        self.pair: Optional[tuple[int, int]] = None

    def offer(self, value: float, pair: tuple[int, int]) -> None:
        if value > self.value or (value == self.value and self.pair is not None and pair < self.pair):
            self.value = value
            self.pair = pair


def _scan_exact(grid: Grid, v: FloatArray, alpha: float) -> tuple[_Best, int]:
    N = grid.N
    table = distance_table(grid, alpha)
    best = _Best()
    scanned = 0

    if grid.n == 1:
        for a in range(1, N):
            r = np.abs(v[a:] - v[:-a]) / table[a]
            i = int(np.argmax(r))
            best.offer(float(r[i]), (i, i + a))
            scanned += r.size
        return best, scanned

    for a in range(N):
        for b in range(-(N - 1), N):
            if a == 0 and b <= 0:
                continue
            j0, j1 = max(0, -b), N - max(0, b)
            r = np.abs(v[a:, j0 + b:j1 + b] - v[:N - a, j0:j1]) / table[a, abs(b)]
            if b >= 0:
                # the corner only ever appears as the second node
                r[N - 1 - a, N - 1 - b - j0] = -1.0
            li, lj = np.unravel_index(int(np.argmax(r)), r.shape)
            first = (int(li), int(lj) + j0)
            second = (first[0] + a, first[1] + b)
            best.offer(float(r[li, lj]), (first[0] * N + first[1], second[0] * N + second[1]))
            scanned += r.size
    # pairs touching the corner were masked
    return best, scanned - (N * N - 1 if grid.n == 2 else 0)


def _scan_pairs(grid: Grid, v: FloatArray, alpha: float,
                f1: np.ndarray, f2: np.ndarray) -> _Best:
    """Maximum over explicit flat index pairs with ``f1 < f2``."""
    best = _Best()
    if f1.size == 0:
        return best
    table = distance_table(grid, alpha)
    flat = v.ravel()
    if grid.n == 1:
        denom = table[f2 - f1]
    else:
        N = grid.N
        i1, j1 = np.divmod(f1, N)
        i2, j2 = np.divmod(f2, N)
        denom = table[np.abs(i2 - i1), np.abs(j2 - j1)]
    r = np.abs(flat[f2] - flat[f1]) / denom
    m = r.max()
    hits = np.flatnonzero(r == m)
    order = np.lexsort((f2[hits], f1[hits]))
    k = hits[order[0]]
    best.offer(float(m), (int(f1[k]), int(f2[k])))
    return best


def _sampled_pairs(grid: Grid, constraints: Optional[ConstraintSet],
                   samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    dof = np.flatnonzero(grid.dof_mask().ravel())
    rng = np.random.default_rng(seed)
    a = rng.choice(dof, size=samples)
    b = rng.choice(dof, size=samples)
    if constraints is not None:
        for idx in constraints.indices:
            c = np.ravel_multi_index(idx, grid.shape)
            a = np.concatenate([a, np.full(dof.size, c)])
            b = np.concatenate([b, dof])
    keep = a != b
    a, b = a[keep], b[keep]
    f1, f2 = np.minimum(a, b), np.maximum(a, b)
    pairs = np.unique(np.stack([f1, f2], axis=1), axis=0)
    return pairs[:, 0], pairs[:, 1]


def resolve_mode(grid: Grid, mode: str) -> str:
    if mode not in MODES:
        raise AnalysisError(f"unknown seminorm mode {mode!r}, expected one of {MODES}")
    if mode == "auto":
        return "exact" if grid.N <= EXACT_MAX_N else "sampled"
    return mode


def holder_seminorm(field: ScalarField,
                    params: EnergyParams,
                    mode: str = "auto",
                    constraints: Optional[ConstraintSet] = None,
                    samples: int = DEFAULT_SAMPLES,
                    seed: int = 0) -> HolderReport:
    """Largest Hölder ratio over node pairs.

    ``exact`` scans every pair, ``sampled`` a seeded random subset plus every
    pair through a pinned node. Ties go to the lexicographically smallest
    pair. A constant field yields a degenerate report rather than an error.
    """
    grid = field.grid
    params.check(grid)
    mode = resolve_mode(grid, mode)
    alpha = params.holder_exponent(grid.n)
    v = field.values

    if mode == "exact":
        best, scanned = _scan_exact(grid, v, alpha)
    else:
        f1, f2 = _sampled_pairs(grid, constraints, samples, seed)
        best = _scan_pairs(grid, v, alpha, f1, f2)
        scanned = int(f1.size)

    norm = physical_dirichlet_norm(field, params)
    ratio_c = ratio_at_constraints(field, params, constraints) if constraints is not None else None

    if best.value <= 0.0 or best.pair is None:
        log.warning("constant field: Hölder seminorm is 0 and has no maximizing pair")
        return HolderReport(seminorm=0.0, ratio_at_constraints=ratio_c, dirichlet_norm=norm,
                            mode=mode, pairs_scanned=scanned, degenerate=True)

    pair = (_unflatten(grid, best.pair[0]), _unflatten(grid, best.pair[1]))
    c_star = best.value / norm if norm > 0 else None
    log.debug(f"seminorm={best.value!r} at {pair} ({mode}, {scanned} pairs)")
    return HolderReport(seminorm=best.value,
                        argmax_pair=pair,
                        ratio_at_constraints=ratio_c,
                        c_star_estimate=c_star,
                        dirichlet_norm=norm,
                        mode=mode,
                        pairs_scanned=scanned)


def _unflatten(grid: Grid, flat: int) -> NodeIndex:
    return tuple(int(i) for i in np.unravel_index(flat, grid.shape))


def ratio_at_constraints(field: ScalarField,
                         params: EnergyParams,
                         constraints: ConstraintSet) -> float:
    """Hölder ratio between the highest and lowest pinned nodes."""
    grid = field.grid
    hi, lo = constraints.high.index, constraints.low.index
    offset = tuple(abs(a - b) for a, b in zip(hi, lo))
    return abs(field.values[hi] - field.values[lo]) / grid.distance_power(
        offset, params.holder_exponent(grid.n))


def sharp_constant_estimate(field: ScalarField, params: EnergyParams, mode: str = "auto",
                            **kwargs) -> float:
    """Seminorm over Dirichlet norm: a witness for the sharp constant."""
    report = holder_seminorm(field, params, mode, **kwargs)
    if report.dirichlet_norm == 0:
        raise AnalysisError("zero Dirichlet norm, the C* estimate is undefined")
    return report.seminorm / report.dirichlet_norm


def c_star_trend(estimates: list[float]) -> list[float]:
    """Relative change of each estimate with respect to its predecessor."""
    if any(e <= 0 for e in estimates):
        raise AnalysisError("C* estimates must be positive")
    return [abs(b - a) / a for a, b in zip(estimates, estimates[1:])]
