import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_force_coherence, central_difference
from sphericoh.coherence import build_sensing_matrix, theorem_lower_bound
from sphericoh.grids import Grid
from sphericoh.optimize import (OptimizerConfig, OptimizerState, gradient, pairwise_pnorm,
                                pnorm_objective, run, step)
from sphericoh.specfun import PoleError


def random_grid(m, seed, kind="wigner", theta_jitter=False):
    rng = np.random.default_rng(seed)
    g = Grid.equispaced(m, rng.uniform(0, 2 * math.pi, m), rng.uniform(0, 2 * math.pi, m), kind=kind)
    if theta_jitter:
        theta = np.sort(rng.uniform(0.1, math.pi - 0.1, m))
        g = g.with_angles(theta=theta)
    return g


def test_pairwise_pnorm_scaling():
    assert pairwise_pnorm([3.0, 4.0], 2) == pytest.approx(5.0)
    assert pairwise_pnorm([1e-200, 1e-200], 8) == pytest.approx(2 ** 0.125 * 1e-200)
    assert pairwise_pnorm([], 8) == 0.0


@given(st.integers(0, 10 ** 6), st.sampled_from(["wigner", "sh"]))
def test_objective_is_pnorm_over_pairs_and_bounds_coherence(seed, kind):
    g = random_grid(9, seed, kind)
    A = build_sensing_matrix(g, 3)
    cols = A.entries / A.column_norms
    G = np.abs(cols.conj().T @ cols)
    pairs = G[np.triu_indices_from(G, 1)]
    obj = pnorm_objective(g, 3, p=8)
    assert obj == pytest.approx(pairwise_pnorm(pairs, 8), rel=1e-12)
    assert obj >= brute_force_coherence(A.entries) - 1e-12


def _fd_check(g, B, wrt, kind):
    def f(v):
        return pnorm_objective(g.with_angles(**{wrt: v}), B, p=8)

    base = getattr(g, wrt).copy()
    fd = central_difference(f, base, h=1e-6)
    an = gradient(g, B, p=8, wrt=wrt)
    scale = max(np.max(np.abs(fd)), 1e-8)
    return np.max(np.abs(an - fd)) / scale


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("wrt", ["phi", "chi", "theta"])
def test_gradients_match_finite_differences(seed, wrt):
    g = random_grid(8, seed, theta_jitter=(wrt == "theta"))
    assert _fd_check(g, 3, wrt, "wigner") <= 1e-5


@pytest.mark.parametrize("seed", range(3))
def test_spherical_gradients(seed):
    g = random_grid(10, seed, kind="sh", theta_jitter=True)
    assert _fd_check(g, 4, "phi", "sh") <= 1e-5
    assert _fd_check(g, 4, "theta", "sh") <= 1e-5


def test_theta_gradient_at_poles():
    g = random_grid(6, 0)
    with pytest.raises(PoleError):
        gradient(g, 3, wrt="theta")
    held = gradient(g, 3, wrt="theta", hold_poles=True)
    assert held[0] == 0.0 and held[-1] == 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(p=3)
    with pytest.raises(ValueError):
        OptimizerConfig(method="lbfgs")
    with pytest.raises(ValueError):
        OptimizerConfig(i_max=0)


def test_step_rules_first_iteration():
    g = np.array([2.0, -0.5])
    x = np.array([1.0, 1.0])
    _, sgd = step(OptimizerState.zeros("sgd", 2), x, g, 0.1, wrap=False)
    np.testing.assert_allclose(sgd, [0.8, 1.05])
    # bias-corrected Adam's first step is -eta * sign(g)
    _, adam = step(OptimizerState.zeros("adam", 2), x, g, 0.1, wrap=False)
    np.testing.assert_allclose(adam, [0.9, 1.1], atol=1e-7)
    _, ada = step(OptimizerState.zeros("adagrad", 2), x, g, 0.1, wrap=False)
    np.testing.assert_allclose(ada, [0.9, 1.1], atol=1e-7)
    state, dd = step(OptimizerState.zeros("adadelta", 2), x, g, 1.0, wrap=False)
    want = -np.sqrt(1e-6) / np.sqrt(0.05 * g * g + 1e-6) * g
    np.testing.assert_allclose(dd, x + want)
    assert state.t == 1


def test_step_wraps_into_period():
    _, out = step(OptimizerState.zeros("sgd", 1), np.array([0.05]), np.array([1.0]), 0.1)
    assert 0 <= out[0] < 2 * math.pi
    assert out[0] == pytest.approx(2 * math.pi - 0.05)


def test_run_single_iteration_returns_start():
    res = run(OptimizerConfig(i_max=1, seed=3), 3, 9)
    assert len(res.trace) == 1
    rng = np.random.default_rng(3)
    np.testing.assert_allclose(res.best_grid.phi, rng.uniform(0, 2 * math.pi, 9))


def test_run_is_deterministic_and_records_best():
    a = run(OptimizerConfig(i_max=30, seed=1), 3, 9)
    b = run(OptimizerConfig(i_max=30, seed=1), 3, 9)
    assert a.trace_csv() == b.trace_csv()
    assert a.final_mu == min(mu for _, _, mu in a.trace)
    assert a.lower_bound == pytest.approx(theorem_lower_bound(3, 9, normalized=True))


def test_run_reduces_coherence():
    res = run(OptimizerConfig(i_max=200, seed=0), 4, 16, kind="sh")
    assert res.final_mu < res.trace[0][2]
    assert res.final_mu >= res.lower_bound - 1e-9


def test_run_with_theta_keeps_poles():
    res = run(OptimizerConfig(i_max=20, seed=0, optimize_theta=True), 3, 9, kind="sh")
    assert res.best_grid.theta[0] == pytest.approx(math.pi)
    assert res.best_grid.theta[-1] == 0.0
