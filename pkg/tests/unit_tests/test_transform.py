import numpy as np
import pytest

from morrey.analysis import check_stability, smooth_perturbation, transform_extremal
from morrey.energy import EnergyParams
from morrey.errors import AnalysisError
from morrey.field import ScalarField, canonical_constraints, make_grid
from morrey.oned import clamp_plus_bump, sample_extremal_1d


@pytest.fixture
def canonical(grid2):
    return ScalarField.from_function(grid2, lambda x, y: y / (1.0 + x * x))


@pytest.fixture
def line():
    return make_grid(1, 4, 10)


class TestTransform:

    def test_identity(self, grid2, canonical):
        u = transform_extremal(canonical, (0.0, 1.0), (0.0, -1.0), 1.0, -1.0).sample(grid2)
        np.testing.assert_allclose(u.values, canonical.values, atol=1e-12)

    def test_swapped_values_negate(self, grid2, canonical):
        u = transform_extremal(canonical, (0.0, 1.0), (0.0, -1.0), -1.0, 1.0).sample(grid2)
        np.testing.assert_allclose(u.values, (-canonical).values, atol=1e-12)
        # equivalently the reflection y -> -y
        dof = grid2.dof_mask() & grid2.dof_mask()[:, ::-1]
        np.testing.assert_allclose(u.values[dof], canonical.values[:, ::-1][dof], atol=1e-12)

    def test_rotated_pair(self, canonical):
        u = transform_extremal(canonical, (1.0, 0.0), (-1.0, 0.0), 3.0, 1.0)
        assert u((1.0, 0.0)) == pytest.approx(3.0, abs=1e-10)
        assert u((-1.0, 0.0)) == pytest.approx(1.0, abs=1e-10)
        assert u((0.0, 0.0)) == pytest.approx(2.0, abs=1e-10)

    def test_outside_canonical_domain(self, grid2, canonical):
        u = transform_extremal(canonical, (0.0, 0.5), (0.0, -0.5), 1.0, -1.0)
        with pytest.raises(AnalysisError):
            u.sample(grid2)

    def test_invalid_arguments(self, canonical):
        with pytest.raises(AnalysisError):
            transform_extremal(canonical, (0.0, 1.0), (0.0, 1.0), 1.0, -1.0)
        with pytest.raises(AnalysisError):
            transform_extremal(canonical, (0.0, 1.0), (0.0, -1.0), 1.0, 1.0)
        with pytest.raises(AnalysisError):
            transform_extremal(canonical, (1.0,), (0.0, -1.0), 1.0, -1.0)


class TestStability:

    def test_extremal_has_no_slack(self, line):
        clamp = sample_extremal_1d(line)
        report = check_stability(clamp, EnergyParams(p=4.0), clamp)
        assert report.c_star == 1.0
        assert report.x0 == (-1.0,)
        assert report.y0 == (1.0,)
        assert abs(report.slack) <= 1e-12 * report.rhs

    @pytest.mark.parametrize("p", [4.0, 1.5])
    def test_clamp_plus_bump(self, line, p):
        clamp = sample_extremal_1d(line)
        test_field = clamp_plus_bump(line, center=2.0, radius=0.5, height=0.1)
        report = check_stability(test_field, EnergyParams(p=p), clamp)
        assert report.exponent == (p if p > 2 else p / (p - 1.0))
        assert report.slack >= -1e-3 * report.rhs
        assert report.slack > 0.0

    def test_constant_field(self, line):
        clamp = sample_extremal_1d(line)
        with pytest.raises(AnalysisError):
            check_stability(ScalarField.zeros(line), EnergyParams(p=4.0), clamp)

    def test_dimension_mismatch(self, line, canonical):
        with pytest.raises(AnalysisError):
            check_stability(sample_extremal_1d(line), EnergyParams(p=4.0), canonical)


class TestPerturbation:

    @pytest.mark.parametrize("fixture", ["grid1", "grid2"])
    def test_vanishes_at_pins_and_axis(self, fixture, request, rng):
        grid = request.getfixturevalue(fixture)
        cons = canonical_constraints(grid)
        base = ScalarField.zeros(grid)
        perturbed = smooth_perturbation(base, cons, 0.05, rng)
        diff = (perturbed - base).values
        for e in cons.entries:
            assert diff[e.index] == 0.0
        assert np.all(diff[grid.center] == 0.0)
        assert np.abs(diff).max() == pytest.approx(0.05)

    def test_seeded(self, grid2):
        cons = canonical_constraints(grid2)
        base = ScalarField.zeros(grid2)
        a = smooth_perturbation(base, cons, 0.1, np.random.default_rng(5))
        b = smooth_perturbation(base, cons, 0.1, np.random.default_rng(5))
        assert a == b
