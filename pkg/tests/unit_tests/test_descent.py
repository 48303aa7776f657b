import numpy as np
import pytest
import yaml

from morrey.analysis import check_reflection_antisymmetry
from morrey.descent import (
    DescentConfig,
    DescentState,
    adaptive_tau,
    default_initial_guess,
    descent_step,
    resume_descent,
    run_descent,
)
from morrey.energy import EnergyParams, discrete_energy
from morrey.errors import ConstraintError, DescentError, DivergenceError
from morrey.field import (
    ConstraintSet,
    ScalarField,
    canonical_constraints,
    load_archive,
    make_grid,
)
from morrey.oned import sample_extremal_1d

P4 = EnergyParams(p=4.0)


@pytest.fixture
def cons2(grid2):
    return canonical_constraints(grid2)


@pytest.fixture
def guess2(grid2, cons2):
    return default_initial_guess(grid2, cons2)


class TestDescentConfig:

    @pytest.mark.parametrize("kwargs", [
        dict(tau=0.0), dict(tau=float("nan")), dict(max_iters=0), dict(grad_tol=-1.0),
        dict(history_every=0), dict(armijo=1.0), dict(checkpoint_every=-1),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            DescentConfig(**kwargs)

    def test_reference_defaults(self):
        config = DescentConfig()
        assert config.tau == 1e-10
        assert config.max_iters == 10 ** 8
        assert not config.adaptive


class TestInitialGuess:

    def test_canonical_2d(self, grid2, cons2, guess2):
        assert cons2.satisfied_by(guess2)
        assert check_reflection_antisymmetry(guess2) == 0.0
        assert guess2.values[grid2.center, grid2.center] == 0.0

    def test_1d(self, grid1):
        cons = canonical_constraints(grid1)
        field = default_initial_guess(grid1, cons)
        (x,) = grid1.coordinates()
        np.testing.assert_array_equal(field.values[x > 1], 1.0)
        np.testing.assert_array_equal(field.values[x < -1], -1.0)
        assert cons.satisfied_by(field)
        inner = field.values[np.abs(x) <= 1]
        assert np.all(np.diff(inner) > 0)

    def test_custom_constraints_rejected(self, grid2):
        cons = ConstraintSet.build(grid2, [((2, 2), 1.0), ((9, 9), 0.0)])
        with pytest.raises(ConstraintError):
            default_initial_guess(grid2, cons)


class TestDescentStep:

    def test_pins_and_corner_stay(self, grid2, cons2, guess2):
        state = DescentState(field=guess2)
        new = descent_step(state, P4, DescentConfig(tau=1e-3), cons2)
        assert new.iteration == 1
        assert cons2.satisfied_by(new.field)
        assert new.field.values[grid2.corner] == 0.0
        assert not np.array_equal(new.field.values, guess2.values)

    def test_infeasible_start(self, grid2, cons2):
        state = DescentState(field=ScalarField.zeros(grid2))
        with pytest.raises(DescentError):
            descent_step(state, P4, DescentConfig(), cons2)

    def test_adaptive_tau_decreases_energy(self, cons2, guess2):
        state = DescentState(field=guess2)
        config = DescentConfig(tau=1e-4, adaptive=True)
        tau = adaptive_tau(state, P4, config, cons2)
        assert tau >= 1e-4
        new = descent_step(state, P4, config, cons2, tau=tau)
        assert discrete_energy(new.field, P4) < discrete_energy(guess2, P4)


class TestRunDescent:

    def test_energy_is_nonincreasing(self, cons2, guess2):
        config = DescentConfig(tau=1e-4, adaptive=True, max_iters=300, log_every=0)
        state = run_descent(guess2, P4, config, cons2)
        energies = [e for _, e in state.energy_history]
        assert len(energies) == 301
        assert all(b <= a for a, b in zip(energies, energies[1:]))
        assert cons2.satisfied_by(state.field)
        assert state.stop_reason == "max_iters"

    def test_converges_with_relative_tolerance(self, cons2, guess2):
        config = DescentConfig(tau=1e-4, adaptive=True, rel_tol=1e-2, max_iters=100_000,
                               history_every=50, log_every=0)
        state = run_descent(guess2, P4, config, cons2)
        assert state.stop_reason == "converged"
        r0 = state.grad_inf_history[0][1]
        assert state.residual <= 1e-2 * r0
        assert state.energy_history[-1][0] == state.iteration

    def test_resume_matches_uninterrupted_run(self, cons2, guess2, tmp_path):
        straight = run_descent(guess2, P4, DescentConfig(tau=1e-4, grad_tol=0.0, max_iters=40),
                               cons2)
        first = run_descent(guess2, P4,
                            DescentConfig(tau=1e-4, grad_tol=0.0, max_iters=20,
                                          checkpoint_every=20),
                            cons2, checkpoint_dir=tmp_path)
        checkpoint = tmp_path / "field-0000000020.archive"
        assert checkpoint.exists()
        assert load_archive(checkpoint).field == first.field
        resumed = resume_descent(checkpoint, P4, DescentConfig(tau=1e-4, grad_tol=0.0, max_iters=40),
                                 cons2)
        assert resumed.iteration == 40
        assert resumed.field == straight.field

    def test_resume_keeps_relative_tolerance(self, cons2, guess2, tmp_path):
        config = DescentConfig(tau=1e-4, rel_tol=0.05, max_iters=100_000, log_every=0)
        straight = run_descent(guess2, P4, config, cons2)
        assert straight.stop_reason == "converged"
        first = run_descent(guess2, P4, config.copy(update={"max_iters": 20, "checkpoint_every": 20}),
                            cons2, checkpoint_dir=tmp_path)
        header = load_archive(tmp_path / "field-0000000020.archive").header
        assert header.tol == first.tol == straight.tol
        assert header.tau == 1e-4
        resumed = resume_descent(tmp_path / "field-0000000020.archive", P4, config, cons2)
        assert resumed.tol == straight.tol
        assert resumed.iteration == straight.iteration
        assert resumed.field == straight.field

    def test_resume_adaptive_momentum_run(self, cons2, guess2, tmp_path):
        config = DescentConfig(tau=1e-4, adaptive=True, momentum=True, grad_tol=0.0,
                               max_iters=60, checkpoint_every=20, log_every=0)
        straight = run_descent(guess2, P4, config, cons2)
        first = run_descent(guess2, P4, config.copy(update={"max_iters": 20}), cons2,
                            checkpoint_dir=tmp_path)
        header = load_archive(tmp_path / "field-0000000020.archive").header
        assert header.tau == first.tau
        resumed = resume_descent(tmp_path / "field-0000000020.archive", P4, config, cons2)
        assert resumed.iteration == 60
        assert resumed.field == straight.field

    def test_resume_checks_exponent(self, cons2, guess2, tmp_path):
        run_descent(guess2, P4, DescentConfig(tau=1e-4, max_iters=5, checkpoint_every=5), cons2,
                    checkpoint_dir=tmp_path)
        with pytest.raises(DescentError):
            resume_descent(tmp_path / "field-0000000005.archive", EnergyParams(p=3.0),
                           DescentConfig(max_iters=10), cons2)

    def test_resume_past_max_iters(self, cons2, guess2, tmp_path):
        run_descent(guess2, P4, DescentConfig(tau=1e-4, max_iters=5, checkpoint_every=5), cons2,
                    checkpoint_dir=tmp_path)
        with pytest.raises(DescentError):
            resume_descent(tmp_path / "field-0000000005.archive", P4,
                           DescentConfig(max_iters=5), cons2)

    def test_divergence(self, cons2, guess2):
        with pytest.raises(DivergenceError):
            run_descent(guess2, P4, DescentConfig(tau=10.0, max_iters=100), cons2)

    def test_manifest(self, cons2, guess2, tmp_path):
        path = tmp_path / "manifest.yaml"
        config = DescentConfig(tau=1e-4, max_iters=10, history_every=5)
        run_descent(guess2, P4, config, cons2, manifest_path=path)
        data = yaml.safe_load(path.read_text())
        assert data["stop_reason"] == "max_iters"
        assert data["iterations"] == 10
        assert [h["iteration"] for h in data["energy_history"]] == [0, 5, 10]
        assert data["p"] == 4.0

    def test_momentum_keeps_energy_nonincreasing(self, cons2, guess2):
        config = DescentConfig(tau=1e-4, adaptive=True, momentum=True, rel_tol=1e-3,
                               max_iters=100_000, log_every=0)
        state = run_descent(guess2, P4, config, cons2)
        assert state.stop_reason == "converged"
        assert state.residual <= 1e-3 * state.grad_inf_history[0][1]
        energies = [e for _, e in state.energy_history]
        assert all(b <= a for a, b in zip(energies, energies[1:]))
        assert cons2.satisfied_by(state.field)
        assert state.field.values[cons2.grid.corner] == 0.0

    def test_rejected_ladder_stops_without_stepping(self, cons2, guess2):
        config = DescentConfig(tau=10.0, adaptive=True, max_halvings=0, max_iters=100)
        state = run_descent(guess2, P4, config, cons2)
        assert state.stop_reason == "stalled"
        assert state.iteration == 0
        assert state.field == guess2
        assert [i for i, _ in state.energy_history] == [0]

    def test_stationary_start_returns_immediately(self):
        grid = make_grid(1, 2, 4)
        cons = canonical_constraints(grid)
        clamp = sample_extremal_1d(grid)
        state = run_descent(clamp, P4, DescentConfig(tau=1e-4, adaptive=True), cons)
        assert state.stop_reason == "converged"
        assert state.iteration == 0
        assert state.field == clamp
