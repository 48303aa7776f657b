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
"""Gradient descent on the discrete energy with pinned nodes.

All free nodes are updated simultaneously from the previous iterate::

    v[m] = v[m-1] - tau * grad E(v[m-1])

Pinned nodes and the unused corner are never written.
"""

import logging
import math
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from ..energy import EnergyParams, energy_of, gradient_of
from ..errors import DescentError, DivergenceError, EnergyError
from ..field import ConstraintSet, FieldArchive, ScalarField, load_archive, save_field
from ..types import FloatArray
from .state import DescentConfig, DescentState, RunManifest

log = logging.getLogger(__name__)

CheckpointCallback = Callable[[FieldArchive], None]


class _Problem:
    """Raw-array view of one constrained minimization."""

    def __init__(self, params: EnergyParams, constraints: ConstraintSet):
        self.n = constraints.grid.n
        self.p = params.p
        self.eps = params.smoothing_eps
        self.free = constraints.free_mask()
        if self.p < 2 and self.eps == 0:
            raise EnergyError(f"the gradient is singular for p={self.p} < 2 without smoothing")

    def energy(self, v: FloatArray) -> float:
        return energy_of(v, self.n, self.p, self.eps)

    def gradient(self, v: FloatArray) -> FloatArray:
        g = gradient_of(v, self.n, self.p, self.eps)
        if not np.all(np.isfinite(g)):
            raise DivergenceError("non-finite gradient, reduce tau")
        # pinned nodes and the corner never move
        g[~self.free] = 0.0
        return g

    def residual(self, g: FloatArray) -> float:
        return float(np.max(np.abs(g))) if self.free.any() else 0.0

    def step(self, v: FloatArray, g: FloatArray, tau: float) -> FloatArray:
        return np.where(self.free, v - tau * g, v)

    def armijo_tau(self, v: FloatArray, g: FloatArray, e: float,
                   tau0: float, config: DescentConfig) -> Optional[float]:
        """Largest ``tau0 * 2**j`` passing the sufficient-decrease test, or None."""
        gg = float(np.sum(g * g))

        def accepted(tau: float) -> bool:
            return self.energy(self.step(v, g, tau)) <= e - config.armijo * tau * gg

        tau = tau0
        if accepted(tau):
            for _ in range(config.max_doublings):
                if not accepted(2.0 * tau):
                    break
                tau *= 2.0
            return tau
        for _ in range(config.max_halvings):
            tau *= 0.5
            if accepted(tau):
                return tau
        return None


def _check_feasible(field: ScalarField, constraints: ConstraintSet) -> None:
    if field.grid != constraints.grid:
        raise DescentError("initial field and constraints live on different grids")
    if not constraints.satisfied_by(field):
        raise DescentError("pinned node values differ from the prescribed constraints")


def descent_step(state: DescentState,
                 params: EnergyParams,
                 config: DescentConfig,
                 constraints: ConstraintSet,
                 tau: Optional[float] = None) -> DescentState:
    """One simultaneous update with step ``tau`` (``config.tau`` by default)."""
    _check_feasible(state.field, constraints)
    prob = _Problem(params, constraints)
    v = state.field.values
    tau = config.tau if tau is None else tau
    g = prob.gradient(v)
    new = prob.step(v, g, tau)
    return state.copy(update={
        "field": ScalarField(state.field.grid, new, copy=False),
        "iteration": state.iteration + 1,
        "tau": tau,
    })


def adaptive_tau(state: DescentState,
                 params: EnergyParams,
                 config: DescentConfig,
                 constraints: ConstraintSet) -> float:
    """Step size from a doubling/halving ladder with an Armijo test.

    The ladder starts at the last accepted step (``config.tau`` initially).
    Falls back to ``config.tau`` when no rung is accepted.
    """
    prob = _Problem(params, constraints)
    v = state.field.values
    g = prob.gradient(v)
    tau0 = state.tau if state.tau is not None else config.tau
    tau = prob.armijo_tau(v, g, prob.energy(v), tau0, config)
    if tau is None:
        log.warning(f"no step size accepted below tau0={tau0:.3e}, falling back to {config.tau:.3e}")
        return config.tau
    return tau


def run_descent(initial: ScalarField,
                params: EnergyParams,
                config: DescentConfig,
                constraints: ConstraintSet,
                checkpoint_dir: Optional[Path] = None,
                manifest_path: Optional[Path] = None,
                start_iteration: int = 0,
                on_checkpoint: Optional[CheckpointCallback] = None,
                tol: Optional[float] = None,
                tau: Optional[float] = None) -> DescentState:
    """Iterate until the residual drops below tolerance or ``max_iters`` is reached.

    ``tol`` and ``tau`` override the absolute threshold and the first step
    size; :func:`resume_descent` passes the values stored in the checkpoint.

    Raises:
        DivergenceError: the energy exceeds ``divergence_factor`` times its
            initial value or the gradient is no longer finite.
    """
    _check_feasible(initial, constraints)
    params.check(initial.grid)
    if start_iteration >= config.max_iters:
        raise DescentError(f"start iteration {start_iteration} is past max_iters={config.max_iters}")

    grid = initial.grid
    prob = _Problem(params, constraints)

    v = initial.values.copy()
    g = prob.gradient(v)
    e0 = e = prob.energy(v)
    r = prob.residual(g)
    if tol is None:
        tol = config.grad_tol if config.grad_tol is not None else config.rel_tol * r
    tau = config.tau if tau is None else tau
    manifest = RunManifest(config=config, p=params.p, n=grid.n, ell=grid.ell, k=grid.k,
                           start_iteration=start_iteration, tol=tol)
    energy_hist = [(start_iteration, e)]
    grad_hist = [(start_iteration, r)]
    log.info(f"descent start: E={e:.10e} residual={r:.3e} tol={tol:.3e} "
             f"tau={tau:.3e} adaptive={config.adaptive} momentum={config.momentum}")

    it = start_iteration
    stop_reason = "converged" if r <= tol else None
    # momentum state: previous iterate and extrapolation counter
    v_prev, t = v, 1.0

    while stop_reason is None:
        if it >= config.max_iters:
            stop_reason = "max_iters"
            break

        new = None
        if config.momentum and t > 1.0:
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            y = np.where(prob.free, v + ((t - 1.0) / t_next) * (v - v_prev), v)
            gy = prob.gradient(y)
            ey = prob.energy(y)
            step_tau = prob.armijo_tau(y, gy, ey, tau, config) if config.adaptive else tau
            if step_tau is not None:
                trial = prob.step(y, gy, step_tau)
                e_trial = prob.energy(trial)
                if e_trial <= e:
                    new, e_new, tau, t = trial, e_trial, step_tau, t_next
            if new is None:
                log.debug(f"iteration {it}: momentum restart")
                t = 1.0

        if new is None:
            if config.adaptive:
                step_tau = prob.armijo_tau(v, g, e, tau, config)
                if step_tau is None:
                    log.warning(f"iteration {it}: no step size passes the decrease test "
                                f"below tau={tau:.3e}, stopping")
                    stop_reason = "stalled"
                    break
                tau = step_tau
            new = prob.step(v, g, tau)
            e_new = prob.energy(new)
            if config.momentum:
                t = 0.5 * (1.0 + math.sqrt(5.0))

        v_prev, v, e = v, new, e_new
        it += 1
        if not np.isfinite(e) or e > config.divergence_factor * e0:
            log.error(f"iteration {it}: energy {e:.6e} exceeds {config.divergence_factor:g}x "
                      f"initial energy {e0:.6e}")
            raise DivergenceError(f"descent diverged at iteration {it} (E={e:.6e}, E0={e0:.6e}); "
                                  f"reduce tau={config.tau:.3e}")
        g = prob.gradient(v)
        r = prob.residual(g)

        if r <= tol:
            stop_reason = "converged"
        if stop_reason or it % config.history_every == 0:
            energy_hist.append((it, e))
            grad_hist.append((it, r))
        if config.log_every and it % config.log_every == 0:
            log.info(f"iteration {it}: E={e:.12e} residual={r:.3e} tau={tau:.3e}")
        if config.checkpoint_every and it % config.checkpoint_every == 0:
            # a run resumed from here starts without momentum
            v_prev, t = v, 1.0
        if checkpoint_dir is not None and config.checkpoint_every and it % config.checkpoint_every == 0:
            archive = save_field(ScalarField(grid, v), checkpoint_dir / f"field-{it:010d}.archive",
                                 p=params.p, iteration=it, energy=e, tol=tol, tau=tau)
            manifest.checkpoints.append(str(archive.path))
            if on_checkpoint is not None:
                on_checkpoint(archive)

    if energy_hist[-1][0] != it:
        energy_hist.append((it, e))
        grad_hist.append((it, r))

    log.info(f"descent stop ({stop_reason}) after {it - start_iteration} iterations: "
             f"E={e:.12e} residual={r:.3e}")
    state = DescentState(field=ScalarField(grid, v, copy=False),
                         iteration=it,
                         energy_history=energy_hist,
                         grad_inf_history=grad_hist,
                         config=config,
                         tau=tau,
                         tol=tol,
                         stop_reason=stop_reason)
    if manifest_path is not None:
        manifest.record(state)
        manifest.save(manifest_path)
    return state


def resume_descent(archive: Union[FieldArchive, str, Path],
                   params: EnergyParams,
                   config: DescentConfig,
                   constraints: ConstraintSet,
                   **kwargs) -> DescentState:
    """Continue a run from a checkpoint, keeping its iteration counter.

    The stopping threshold and the last accepted step size are taken from the
    checkpoint header when it records them.
    """
    if not isinstance(archive, FieldArchive):
        archive = load_archive(archive)
    header = archive.header
    if header.p is not None and header.p != params.p:
        raise DescentError(f"checkpoint was computed for p={header.p}, not p={params.p}")
    log.info(f"resuming from {archive.path} at iteration {header.iteration}")
    kwargs.setdefault("tol", header.tol if config.grad_tol is None else None)
    kwargs.setdefault("tau", header.tau)
    return run_descent(archive.field, params, config, constraints,
                       start_iteration=header.iteration, **kwargs)
