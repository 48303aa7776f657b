import numpy as np
import pytest

from morrey.errors import ConstraintError, FieldError
from morrey.field import (
    ConstraintSet,
    ScalarField,
    canonical_constraints,
    completed_values,
    interpolate,
    interpolate_many,
)


class TestScalarField:

    def test_corner_is_zeroed(self, grid2):
        field = ScalarField(grid2, np.ones(grid2.shape))
        assert field.values[grid2.corner] == 0.0
        with pytest.raises(FieldError):
            field.value_at(grid2.corner)

    def test_values_are_read_only(self, grid2):
        field = ScalarField.zeros(grid2)
        with pytest.raises(ValueError):
            field.values[0, 0] = 1.0

    def test_input_is_copied(self, grid1):
        raw = np.zeros(grid1.shape)
        field = ScalarField(grid1, raw)
        raw[0] = 5.0
        assert field.values[0] == 0.0

    def test_shape_and_finiteness(self, grid2):
        with pytest.raises(FieldError):
            ScalarField(grid2, np.zeros((3, 3)))
        bad = np.zeros(grid2.shape)
        bad[1, 1] = np.nan
        with pytest.raises(FieldError):
            ScalarField(grid2, bad)

    def test_arithmetic(self, grid2):
        a = ScalarField.from_function(grid2, lambda x, y: x + y)
        b = ScalarField.from_function(grid2, lambda x, y: x - y)
        s = a + b
        X, _ = grid2.coordinates()
        np.testing.assert_allclose(s.dof_values(), (2.0 * X)[grid2.dof_mask()], atol=1e-15)
        assert (a - a).is_constant()
        assert (2 * a - a) == a
        assert (-a).values[0, 0] == 4.0

    def test_grids_must_match(self, grid1, grid2):
        with pytest.raises(FieldError):
            ScalarField.zeros(grid2) + ScalarField.zeros(grid1)


class TestConstraints:

    def test_canonical_2d(self, grid2):
        cons = canonical_constraints(grid2)
        np.testing.assert_array_equal(cons.point(cons.high), [0.0, 1.0])
        np.testing.assert_array_equal(cons.point(cons.low), [0.0, -1.0])
        np.testing.assert_array_equal(cons.midpoint(), [0.0, 0.0])
        assert cons.mask().sum() == 2
        assert cons.free_mask().sum() == grid2.N ** 2 - 3

    def test_canonical_1d(self, grid1):
        cons = canonical_constraints(grid1)
        assert cons.high.index == (grid1.center + grid1.k,)
        assert cons.low.value == -1.0

    def test_apply(self, grid2):
        cons = canonical_constraints(grid2)
        field = cons.apply(ScalarField.zeros(grid2))
        assert cons.satisfied_by(field)
        assert not cons.satisfied_by(ScalarField.zeros(grid2))

    @pytest.mark.parametrize("entries", [
        [((1, 1), 1.0)],
        [((1, 1), 1.0), ((1, 1), -1.0)],
        [((1, 1), 1.0), ((2, 2), 1.0)],
        [((1, 1), 1.0), ((12, 12), -1.0)],
        [((1, 1), 1.0), ((13, 0), -1.0)],
        [((1, 1), 1.0), ((2, 2), float("inf"))],
    ])
    def test_invalid(self, grid2, entries):
        with pytest.raises(ConstraintError):
            ConstraintSet.build(grid2, entries)


class TestInterpolation:

    def test_exact_at_nodes(self, grid2, rng):
        field = ScalarField(grid2, rng.uniform(-1, 1, grid2.shape))
        for idx in [(0, 0), (4, 7), (12, 0), (0, 12), (11, 12)]:
            assert interpolate(field, grid2.node_point(idx)) == field.values[idx]

    def test_affine_fields_are_exact(self, grid2):
        field = ScalarField.from_function(grid2, lambda x, y: 0.5 + 2.0 * x - 3.0 * y)
        pts = np.array([[0.1, 0.2], [-1.9, 1.95], [1.9, 1.9], [2.0, 2.0], [-0.37, -1.41]])
        expected = 0.5 + 2.0 * pts[:, 0] - 3.0 * pts[:, 1]
        np.testing.assert_allclose(interpolate_many(field, pts), expected, rtol=0, atol=1e-12)

    def test_corner_completion(self, grid2):
        field = ScalarField.from_function(grid2, lambda x, y: x * 0.0 + y)
        v = completed_values(field)
        assert v[grid2.corner] == pytest.approx(2.0)
        assert field.values[grid2.corner] == 0.0

    def test_bilinear_midpoint(self, grid1):
        field = ScalarField.from_function(grid1, lambda x: x * x)
        h = grid1.h
        assert interpolate(field, [0.5 * h]) == pytest.approx(0.5 * h * h)

    def test_snap_to_node(self, grid2, rng):
        field = ScalarField(grid2, rng.uniform(-1, 1, grid2.shape))
        idx = (5, 8)
        p = grid2.node_point(idx) + 1e-12
        assert interpolate(field, p) == field.values[idx]

    def test_outside(self, grid2):
        field = ScalarField.zeros(grid2)
        with pytest.raises(FieldError):
            interpolate(field, (2.5, 0.0))
        with pytest.raises(FieldError):
            interpolate(field, (0.0,))
