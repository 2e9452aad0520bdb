"""Control-path generator: endpoint behavior, linearity, basis layout."""

import numpy as np
import pytest

from hmp import dmp


def make_params(**kw):
    kw.setdefault("u0", np.array([0.0, -0.35, 0.0]))
    kw.setdefault("goal", np.array([0.0, 0.0, 0.0]))
    return dmp.DmpParams(**kw)


def test_path_starts_at_u0_exactly():
    params = make_params()
    _, controls = dmp.rollout_controls(params, params.zero_theta(), dt=0.01)
    assert np.array_equal(controls[0], params.u0)


def test_zero_weights_reach_goal():
    params = make_params()
    _, controls = dmp.rollout_controls(params, params.zero_theta(), dt=0.005)
    dist = np.linalg.norm(params.goal - params.u0)
    assert np.linalg.norm(controls[-1] - params.goal) <= 0.02 * dist + 1e-4


def test_bounded_weights_still_reach_goal():
    params = make_params()
    rng = np.random.default_rng(42)
    theta = rng.uniform(-200.0, 200.0, size=(3, params.n_basis))
    _, controls = dmp.rollout_controls(params, theta, dt=0.005)
    dist = np.linalg.norm(params.goal - params.u0)
    assert np.linalg.norm(controls[-1] - params.goal) <= 0.02 * dist + 1e-4


def test_phase_reaches_x_end():
    params = make_params()
    state = dmp.initial_state(params)
    n = int(round(params.duration / 0.001))
    theta = params.zero_theta()
    for _ in range(n):
        state = dmp.step(params, theta, state, 0.001)
    assert state.x == pytest.approx(params.x_end, rel=1e-6)


def test_trajectory_affine_in_weights():
    params = make_params()
    rng = np.random.default_rng(7)
    th1 = rng.normal(scale=50.0, size=(3, params.n_basis))
    th2 = rng.normal(scale=50.0, size=(3, params.n_basis))
    dt = 0.01
    _, base = dmp.rollout_controls(params, params.zero_theta(), dt)
    _, a = dmp.rollout_controls(params, th1, dt)
    _, b = dmp.rollout_controls(params, th2, dt)
    _, ab = dmp.rollout_controls(params, th1 + th2, dt)
    lhs = ab - base
    rhs = (a - base) + (b - base)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_forcing_vanishes_with_phase():
    params = make_params()
    theta = np.full((3, params.n_basis), 150.0)
    strong = np.linalg.norm(dmp.forcing(params, theta, 1.0))
    faded = np.linalg.norm(dmp.forcing(params, theta, params.x_end))
    assert faded < 0.01 * strong


def test_degenerate_axis_keeps_forcing_alive():
    # goal == u0 on x and theta axes: scale substitutes 1, so weights there
    # still bend the path
    params = make_params(u0=np.zeros(3), goal=np.array([0.0, 0.5, 0.0]))
    assert params.scale[0] == 1.0
    assert params.scale[1] == 0.5
    assert params.scale[2] == 1.0
    theta = params.zero_theta()
    theta[0, :] = 100.0
    _, controls = dmp.rollout_controls(params, theta, dt=0.01)
    assert np.max(np.abs(controls[:, 0])) > 1e-3


def test_time_spacing_covers_the_movement():
    params = make_params()
    c = params.centers
    assert c[0] == pytest.approx(1.0)
    assert c[-1] == pytest.approx(params.x_end)
    assert np.all(np.diff(c) < 0.0)
    # time-spaced centers are geometric in phase: equal ratios
    ratios = c[1:] / c[:-1]
    assert np.max(np.abs(ratios - ratios[0])) < 1e-12


def test_phase_spacing_is_linear_in_phase():
    params = make_params(spacing="phase")
    c = params.centers
    assert np.max(np.abs(np.diff(c) - np.diff(c)[0])) < 1e-12


def test_time_spacing_gives_late_movement_authority():
    # half the movement's duration must hold at least a third of the basis
    # centers; phase spacing crams nearly all of them into the early part
    params_t = make_params()
    params_p = make_params(spacing="phase")
    x_half = np.exp(-params_t.alpha_x * 0.5)  # phase at half duration
    late_t = np.sum(params_t.centers <= x_half)
    late_p = np.sum(params_p.centers <= x_half)
    assert late_t >= params_t.n_basis // 3
    assert late_p <= 1


def test_validation():
    with pytest.raises(ValueError, match="duration"):
        make_params(duration=0.0)
    with pytest.raises(ValueError, match="basis"):
        make_params(n_basis=1)
    with pytest.raises(ValueError, match="x_end"):
        make_params(x_end=1.5)
    with pytest.raises(ValueError, match="spacing"):
        make_params(spacing="log")
    with pytest.raises(ValueError, match="shape"):
        dmp.forcing(make_params(), np.zeros((3, 4)), 1.0)
