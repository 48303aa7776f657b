"""Desk-scale reproduction of the planar extremal (n=2, ell=4, k=8)."""

import numpy as np
import pytest

from morrey.analysis import (
    c_star_trend,
    check_cylindrical_symmetry,
    check_midplane_gradient_sign,
    check_pointwise_bounds,
    check_quasiconcavity,
    check_reflection_antisymmetry,
    check_stability,
    dirac_weight_from_energy,
    fit_singular_exponent,
    holder_seminorm,
    morrey_estimate_gap,
    sharp_constant_estimate,
    smooth_perturbation,
)
from morrey.energy import constraint_multiplier

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def solved(extremals):
    return extremals(p=4.0)


def test_descent_converges(solved):
    state, _, _ = solved
    assert state.stop_reason == "converged"
    assert state.residual <= 1e-6 * state.grad_inf_history[0][1]
    energies = [e for _, e in state.energy_history]
    assert all(b <= a for a, b in zip(energies, energies[1:]))


def relative_asymmetry(state, params, cons):
    seminorm = holder_seminorm(state.field, params, mode="exact", constraints=cons).seminorm
    return (check_reflection_antisymmetry(state.field) / seminorm,
            check_cylindrical_symmetry(state.field) / seminorm)


def test_symmetries_improve_with_resolution(extremals):
    # the forward-difference stencil breaks both reflections by O(h)
    coarse = relative_asymmetry(*extremals(k=4))
    fine = relative_asymmetry(*extremals(k=8))
    assert fine[0] < coarse[0]
    assert fine[1] < coarse[1]
    assert max(fine) <= 0.05


def test_bounds_and_sign(solved):
    state, _, cons = solved
    entry = check_pointwise_bounds(state.field, cons)
    assert entry.details["global"] <= 1e-6
    # half-plane bounds hold up to the stencil asymmetry
    floor = check_reflection_antisymmetry(state.field)
    assert entry.details["upper_half"] <= floor
    assert entry.details["lower_half"] <= floor
    assert check_midplane_gradient_sign(state.field).passed


def test_argmax_at_the_pins(solved):
    state, params, cons = solved
    report = holder_seminorm(state.field, params, mode="exact", constraints=cons)
    assert set(report.argmax_pair) == set(cons.indices)
    assert report.seminorm == report.ratio_at_constraints


def test_quasiconcavity(solved):
    state, _, cons = solved
    entry = check_quasiconcavity(state.field, [0.2, 0.4, 0.6, 0.8], cons)
    assert entry.value <= check_reflection_antisymmetry(state.field)


@pytest.mark.parametrize("p", [3.0, 4.0, 6.0])
def test_singular_exponent(extremals, p):
    state, params, cons = extremals(p=p)
    fit = fit_singular_exponent(state.field, cons.point(cons.high), params,
                                other=cons.point(cons.low))
    expected = (p - 2.0) / (p - 1.0)
    assert abs(fit.exponent - expected) <= 0.15 * expected


def test_point_mass_weight(solved):
    state, params, cons = solved
    multiplier = constraint_multiplier(state.field, params, cons.high.index)
    assert multiplier == pytest.approx(dirac_weight_from_energy(state.field, params, cons),
                                       rel=1e-2)
    assert constraint_multiplier(state.field, params, cons.low.index) == pytest.approx(
        -multiplier, rel=1e-2)


def test_stability(solved, rng):
    state, params, cons = solved
    c_star = sharp_constant_estimate(state.field, params, mode="exact")
    for _ in range(5):
        test_field = smooth_perturbation(state.field, cons, 0.02, rng)
        report = check_stability(test_field, params, state.field, c_star=c_star, mode="exact")
        assert report.slack >= -1e-3 * report.rhs


def test_estimate_gap(solved):
    state, params, cons = solved
    report = morrey_estimate_gap(state.field, params, cons)
    assert 0.0 < report.fraction_outside < 1.0


def test_sharp_constant_stabilizes(extremals):
    estimates = []
    for ell, k in [(3, 4), (4, 4), (3, 8), (4, 8)]:
        state, params, _ = extremals(ell=ell, k=k)
        estimates.append(sharp_constant_estimate(state.field, params, mode="exact"))
    assert all(np.isfinite(estimates))
    assert max(abs(c) for c in c_star_trend(estimates)) < 0.05


def test_point_mass_weight_from_the_fit(solved):
    state, params, cons = solved
    fit = fit_singular_exponent(state.field, cons.point(cons.high), params,
                                other=cons.point(cons.low))
    assert fit.dirac_weight == pytest.approx(
        dirac_weight_from_energy(state.field, params, cons), rel=0.2)
