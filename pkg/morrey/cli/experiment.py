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
"""Experiment runner: descent, analysis suite and artifacts of one run."""

import logging
from pathlib import Path
from typing import Any, NamedTuple, Optional

import numpy as np
from rich.console import Console
from rich.table import Table

from ..analysis import (
    HolderReport,
    PropertyEntry,
    PropertyReport,
    check_stability,
    fit_singular_exponent,
    holder_seminorm,
    morrey_estimate_gap,
    run_property_suite,
    smooth_perturbation,
)
from ..config import ExperimentConfig
from ..descent import DescentConfig, DescentState, default_initial_guess, resume_descent, run_descent
from ..energy import EnergyParams
from ..errors import (
    ArchiveError,
    ConfigError,
    DivergenceError,
    GridError,
    MorreyError,
)
from ..field import (
    ConstraintSet,
    Grid,
    ScalarField,
    canonical_constraints,
    load_archive,
    make_grid,
    save_field,
)
from .contours import emit_contours
from .report import emit_report

log = logging.getLogger(__name__)

FIELD_FILE = "field.archive"
CONTOUR_FILE = "contours.txt"
REPORT_FILE = "report.txt"
MANIFEST_FILE = "manifest.yaml"
CHECKPOINT_DIR = "checkpoints"

SUITE_CHECKS = ("symmetry", "bounds", "quasiconcavity", "midplane", "gradient")
CANONICAL_ONLY = ("symmetry", "quasiconcavity", "midplane", "stability")
SINGULAR_RTOL = 0.15
STABILITY_RTOL = 1e-3

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DIVERGED = 2
EXIT_IO = 3


class ExperimentResult(NamedTuple):
    state: DescentState
    constraints: ConstraintSet
    reports: list[Any]
    report_text: str
    out_dir: Path


def build_constraints(config: ExperimentConfig, grid: Grid) -> ConstraintSet:
    """Canonical pins unless ``x0``, ``y0``, ``alpha`` or ``beta`` say otherwise."""
    canonical = canonical_constraints(grid)
    x0 = config.x0 if config.x0 is not None else canonical.point(canonical.high)
    y0 = config.y0 if config.y0 is not None else canonical.point(canonical.low)
    try:
        entries = [(grid.index_of(x0), config.alpha), (grid.index_of(y0), config.beta)]
    except GridError as e:
        raise ConfigError(f"pinned points must be grid nodes: {e}") from e
    constraints = ConstraintSet.build(grid, entries)
    return canonical if constraints == canonical else constraints


def descent_config(config: ExperimentConfig) -> DescentConfig:
    return DescentConfig(tau=config.tau,
                         max_iters=config.max_iters,
                         grad_tol=config.grad_tol,
                         rel_tol=config.rel_tol,
                         adaptive=config.adaptive,
                         momentum=config.momentum,
                         checkpoint_every=config.checkpoint_every,
                         history_every=config.history_every,
                         log_every=config.log_every,
                         seed=config.seed)


def _solve(config: ExperimentConfig, grid: Grid, constraints: ConstraintSet,
           params: EnergyParams, out: Path) -> DescentState:
    dconf = descent_config(config)
    kwargs = dict(checkpoint_dir=out / CHECKPOINT_DIR, manifest_path=out / MANIFEST_FILE)
    if config.resume is not None:
        archive = load_archive(config.resume)
        if archive.field.grid != grid:
            raise ConfigError(f"checkpoint grid {archive.field.grid} does not match the "
                              f"configured n={grid.n}, ell={grid.ell}, k={grid.k}")
        return resume_descent(archive, params, dconf, constraints, **kwargs)
    if constraints == canonical_constraints(grid):
        initial = default_initial_guess(grid, constraints)
    else:
        initial = constraints.apply(ScalarField.zeros(grid))
    return run_descent(initial, params, dconf, constraints, **kwargs)


def _analyses(config: ExperimentConfig, field: ScalarField, constraints: ConstraintSet,
              params: EnergyParams) -> list[Any]:
    grid = field.grid
    enabled = set(config.analysis)
    canonical = constraints == canonical_constraints(grid)
    if not canonical:
        skipped = sorted(enabled.intersection(CANONICAL_ONLY))
        if skipped:
            log.warning(f"custom constraints: skipping {', '.join(skipped)}")
        enabled -= set(CANONICAL_ONLY)
    if grid.n == 1:
        for name in sorted(enabled.intersection({"singular", "gap"})):
            log.warning(f"{name} needs n=2, skipping")
        enabled -= {"singular", "gap"}
    if "stability" in enabled and params.p <= 2 and grid.n > 1:
        log.warning(f"stability inequality needs p > 2 when n={grid.n}, skipping")
        enabled.discard("stability")

    reports: list[Any] = []
    holder: Optional[HolderReport] = None
    if enabled.intersection({"holder", "symmetry", "stability"}):
        holder = holder_seminorm(field, params, config.seminorm_mode, constraints,
                                 samples=config.seminorm_samples, seed=config.seed)
        if "holder" in enabled:
            reports.append(holder)

    suite = run_property_suite(field, params, constraints, enabled.intersection(SUITE_CHECKS),
                               seminorm=holder.seminorm if holder else None,
                               levels=config.levels)

    if "holder" in enabled and holder is not None and holder.ratio_at_constraints is not None:
        gap = holder.seminorm - holder.ratio_at_constraints
        suite.add(PropertyEntry.at_most("argmax_at_constraints", gap, 0.0))

    if "singular" in enabled:
        fit = fit_singular_exponent(field, constraints.point(constraints.high), params,
                                    other=constraints.point(constraints.low))
        reports.append(fit)
        err = abs(fit.exponent - fit.expected_exponent) / fit.expected_exponent
        suite.add(PropertyEntry.at_most("singular_exponent", err, SINGULAR_RTOL))

    if "gap" in enabled:
        gap_report = morrey_estimate_gap(field, params, constraints)
        reports.append(gap_report)
        suite.add(PropertyEntry.above("gap_fraction", gap_report.fraction_outside or 0.0, 0.0,
                                      degenerate=gap_report.degenerate))

    if "stability" in enabled and config.stability_trials > 0:
        rng = np.random.default_rng(config.seed)
        c_star = holder.c_star_estimate if holder is not None and grid.n > 1 else None
        worst = np.inf
        for _ in range(config.stability_trials):
            test = smooth_perturbation(field, constraints, config.stability_amplitude, rng)
            stab = check_stability(test, params, field, c_star=c_star, mode=config.seminorm_mode)
            reports.append(stab)
            worst = min(worst, stab.relative_slack)
        suite.add(PropertyEntry.at_most("stability_deficit", max(0.0, -worst), STABILITY_RTOL,
                                        details={"min_relative_slack": float(worst)}))

    if suite.entries:
        reports.append(suite)
    return reports


def _print_summary(state: DescentState, reports: list[Any], out: Path) -> None:
    console = Console(stderr=True)
    table = Table(title=f"morrey run: {out}")
    table.add_column("check")
    table.add_column("value", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("verdict")
    for r in reports:
        if isinstance(r, PropertyReport):
            for name in sorted(r.entries):
                e = r.entries[name]
                verdict = "[green]PASS" if e.passed else "[red]FAIL"
                table.add_row(name, f"{e.value:.3e}", f"{e.tolerance:.1e}", verdict)
        elif isinstance(r, HolderReport) and r.c_star_estimate is not None:
            table.add_row("c_star_estimate", f"{r.c_star_estimate:.10f}", "", "")
    console.print(f"iterations: {state.iteration} ({state.stop_reason}), "
                  f"energy: {state.energy:.10e}, residual: {state.residual:.3e}")
    console.print(table)


def execute(config: ExperimentConfig, quiet: bool = False) -> ExperimentResult:
    """Run one experiment and write its artifacts under ``config.out``.

    Raises the package errors unchanged; see :func:`run_experiment` for the
    exit-status wrapper.
    """
    grid = make_grid(config.n, config.ell, config.k)
    params = EnergyParams(p=config.p, smoothing_eps=config.smoothing_eps)
    params.check(grid)
    constraints = build_constraints(config, grid)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info(f"run n={grid.n} ell={grid.ell} k={grid.k} N={grid.N} p={params.p} -> {out}")

    state = _solve(config, grid, constraints, params, out)
    save_field(state.field, out / FIELD_FILE, p=params.p, iteration=state.iteration,
               energy=state.energy)

    reports = _analyses(config, state.field, constraints, params)
    if grid.n == 2:
        emit_contours(state.field, config.contour_levels, out / CONTOUR_FILE)

    text = emit_report(config, *reports)
    (out / REPORT_FILE).write_text(text, encoding="utf-8")
    if not quiet:
        _print_summary(state, reports, out)
    return ExperimentResult(state, constraints, reports, text, out)


def exit_code(error: BaseException) -> int:
    if isinstance(error, DivergenceError):
        return EXIT_DIVERGED
    if isinstance(error, (ArchiveError, OSError)):
        return EXIT_IO
    return EXIT_INVALID


def run_experiment(config: ExperimentConfig, quiet: bool = False) -> int:
    """:func:`execute` with errors mapped to exit statuses."""
    try:
        execute(config, quiet=quiet)
    except (MorreyError, OSError) as e:
        log.error(f"{type(e).__name__}: {e}")
        return exit_code(e)
    return EXIT_OK
