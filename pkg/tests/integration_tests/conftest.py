import pytest

from morrey.descent import DescentConfig, default_initial_guess, run_descent
from morrey.energy import EnergyParams
from morrey.field import canonical_constraints, make_grid

DESK_SCALE = dict(ell=4, k=8)


def solve_canonical(n, ell, k, p, rel_tol=1e-6, max_iters=300_000):
    grid = make_grid(n, ell, k)
    cons = canonical_constraints(grid)
    params = EnergyParams(p=p)
    config = DescentConfig(tau=1e-4, adaptive=True, momentum=True, rel_tol=rel_tol,
                           max_iters=max_iters, history_every=1, log_every=0)
    state = run_descent(default_initial_guess(grid, cons), params, config, cons)
    return state, params, cons


@pytest.fixture(scope="session")
def extremals():
    """Converged canonical fields, computed once per (n, ell, k, p)."""
    cache = {}

    def get(p=4.0, n=2, ell=DESK_SCALE["ell"], k=DESK_SCALE["k"]):
        key = (n, ell, k, p)
        if key not in cache:
            cache[key] = solve_canonical(n, ell, k, p)
        return cache[key]

    return get
