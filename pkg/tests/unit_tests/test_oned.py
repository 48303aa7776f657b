import numpy as np
import pytest

from morrey.errors import AnalysisError
from morrey.field import make_grid
from morrey.oned import (
    clamp_plus_bump,
    exact_dirichlet_norm_1d,
    exact_extremal_1d,
    exact_seminorm_1d,
    exact_sharp_constant_1d,
    holder_ratio_integral_bound,
    sample_extremal_1d,
)


class TestClosedForms:

    def test_clamp(self):
        assert exact_extremal_1d(-3.0) == -1.0
        assert exact_extremal_1d(0.25) == 0.25
        assert exact_extremal_1d(1.5) == 1.0
        np.testing.assert_array_equal(exact_extremal_1d(np.array([-2.0, 0.0, 2.0])),
                                      [-1.0, 0.0, 1.0])

    def test_constants(self):
        assert exact_sharp_constant_1d() == 1.0
        assert exact_seminorm_1d(4.0) == pytest.approx(2 ** 0.25)
        assert exact_dirichlet_norm_1d(4.0) == exact_seminorm_1d(4.0)

    def test_sampled_clamp(self, grid1):
        field = sample_extremal_1d(grid1)
        (x,) = grid1.coordinates()
        np.testing.assert_array_equal(field.values, np.clip(x, -1.0, 1.0))

    def test_sampling_needs_1d(self, grid2):
        with pytest.raises(AnalysisError):
            sample_extremal_1d(grid2)


class TestClampPlusBump:

    def test_bump_support(self):
        grid = make_grid(1, 4, 10)
        field = clamp_plus_bump(grid, center=2.0, radius=0.5, height=0.3)
        (x,) = grid.coordinates()
        outside = np.abs(x - 2.0) >= 0.5
        np.testing.assert_array_equal(field.values[outside], np.clip(x, -1.0, 1.0)[outside])
        assert field.values[grid.index_of((2.0,))] == pytest.approx(1.3)

    def test_invalid_radius(self, grid1):
        with pytest.raises(AnalysisError):
            clamp_plus_bump(grid1, 1.5, 0.0, 0.1)


class TestIntegralBound:

    def test_parabola(self):
        xs = np.linspace(0.0, 1.0, 101)
        ratio, bound = holder_ratio_integral_bound(xs, xs ** 2, 1.0, 0.0, 4.0)
        assert ratio == pytest.approx(1.0)
        assert bound == pytest.approx((16.0 / 5.0) ** 0.25, rel=1e-3)
        assert ratio < bound

    def test_linear_is_sharp(self):
        xs = np.linspace(-1.0, 1.0, 41)
        ratio, bound = holder_ratio_integral_bound(xs, 0.5 * xs, 1.0, -1.0, 3.0)
        assert ratio == pytest.approx(bound, rel=1e-12)

    def test_unsorted_samples(self):
        xs = np.array([0.5, 0.0, 1.0, 0.25, 0.75])
        ratio, bound = holder_ratio_integral_bound(xs, xs ** 3, 1.0, 0.0, 4.0)
        assert ratio <= bound

    @pytest.mark.parametrize("kwargs", [
        dict(x=0.0, y=1.0),
        dict(p=1.0),
        dict(x=0.95),
        dict(us=np.zeros(3)),
    ])
    def test_invalid(self, kwargs):
        args = dict(xs=np.linspace(0.0, 1.0, 11), us=np.zeros(11), x=1.0, y=0.0, p=4.0)
        args.update(kwargs)
        with pytest.raises(AnalysisError):
            holder_ratio_integral_bound(**args)

    def test_repeated_coordinates(self):
        xs = np.array([0.0, 0.5, 0.5, 1.0])
        with pytest.raises(AnalysisError, match="distinct"):
            holder_ratio_integral_bound(xs, xs, 1.0, 0.0, 4.0)
