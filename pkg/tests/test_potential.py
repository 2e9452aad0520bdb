"""W(z, u): reference derivatives against finite differences and closed forms."""

import numpy as np
import pytest

from conftest import (
    fd_gradient,
    fd_hessian,
    make_bookshelf_params,
    make_chain_params,
    random_control,
    random_scene_state,
    rel_err,
)
from hmp import potential as pt


def _flat_w(params, n):
    def f(v):
        state = pt.SceneState.from_flat(v[:n], params.n_books, params.n_pairs)
        return pt.w_total(state, v[n:], params)

    return f


def test_w_nonnegative(rng):
    params = make_bookshelf_params()
    for _ in range(30):
        state = random_scene_state(params, rng)
        u = random_control(state, rng)
        assert pt.w_total(state, u, params) >= 0.0


def test_control_force_example():
    params = make_chain_params()
    state = pt.SceneState(np.zeros(3), np.empty((0, 2)), np.empty(0))
    u = np.array([0.01, 0.0, 0.0])
    f = pt.control_force(state, u, params)
    np.testing.assert_allclose(f, [-8.0, 0.0, 0.0], atol=1e-12)


def test_grad_pure_control_displacement():
    params = pt.PotentialParams(k_c=np.array([800.0, 800.0, 20.0]),
                                grasped_shape=make_chain_params().grasped_shape)
    state = pt.SceneState(np.zeros(3), np.empty((0, 2)), np.empty(0))
    u = np.array([0.01, 0.0, 0.0])
    g = pt.grad_z(state, u, params, engine="reference")
    np.testing.assert_allclose(g, [-8.0, 0.0, 0.0], atol=1e-12)


def test_reference_gradient_matches_fd(rng):
    params = make_bookshelf_params()
    n = params.n_state
    f = _flat_w(params, n)
    for _ in range(8):
        state = random_scene_state(params, rng)
        u = random_control(state, rng)
        x = np.concatenate([state.flatten(), u])
        w, grad, hess = pt.derivatives_reference(state, u, params)
        assert w == pytest.approx(f(x), rel=1e-12)
        assert rel_err(fd_gradient(f, x), grad) < 1e-5
        assert np.allclose(hess, hess.T)


def test_reference_hessian_matches_fd(rng):
    params = make_bookshelf_params()
    n = params.n_state
    f = _flat_w(params, n)
    for _ in range(4):
        state = random_scene_state(params, rng)
        u = random_control(state, rng)
        x = np.concatenate([state.flatten(), u])
        _, _, hess = pt.derivatives_reference(state, u, params)
        assert rel_err(fd_hessian(f, x), hess, norm_floor=1e-5) < 1e-4


def test_block_structure_constant_u_blocks(rng):
    params = make_bookshelf_params()
    state = random_scene_state(params, rng)
    u = random_control(state, rng)
    hzz, huz, huu = pt.second_derivatives(state, u, params, engine="reference")
    np.testing.assert_allclose(huu, np.diag(params.k_c), atol=1e-12)
    expect_uz = np.zeros((3, params.n_state))
    expect_uz[:, :3] = -np.diag(params.k_c)
    np.testing.assert_allclose(huz, expect_uz, atol=1e-12)
    assert hzz.shape == (params.n_state, params.n_state)
    # grasp spring contributes +K_c to the pose block diagonal
    assert hzz[1, 1] >= params.k_c[1] - 1e-9


def test_control_force_matches_engine(rng):
    params = make_bookshelf_params()
    state = random_scene_state(params, rng)
    u = random_control(state, rng)
    _, grad, _ = pt.derivatives_reference(state, u, params)
    n = params.n_state
    np.testing.assert_allclose(pt.control_force(state, u, params), -grad[n:], atol=1e-12)


def test_translation_equivariance_without_contacts():
    params = pt.PotentialParams(k_c=np.array([800.0, 800.0, 20.0]),
                                grasped_shape=make_chain_params().grasped_shape)
    state = pt.SceneState(np.array([0.1, -0.2, 0.3]), np.empty((0, 2)), np.empty(0))
    u = np.array([0.15, -0.18, 0.31])
    w0 = pt.w_total(state, u, params)
    delta = np.array([0.7, -1.1, 0.0])
    shifted = pt.SceneState(state.zb + delta, state.books, state.gammas)
    assert pt.w_total(shifted, u + delta, params) == pytest.approx(w0, rel=1e-12)


def test_flatten_roundtrip(rng):
    params = make_bookshelf_params()
    state = random_scene_state(params, rng)
    flat = state.flatten()
    back = pt.SceneState.from_flat(flat, params.n_books, params.n_pairs)
    np.testing.assert_array_equal(back.flatten(), flat)
    assert state.n == params.n_state == 11


def test_params_validation():
    import hmp.contact as ct
    from hmp.geometry import CornerId

    shape = make_chain_params().grasped_shape
    with pytest.raises(ValueError):
        pt.PotentialParams(k_c=np.array([1.0, 1.0]), grasped_shape=shape)
    with pytest.raises(ValueError, match="gamma_index"):
        pt.PotentialParams(
            k_c=np.array([800.0, 800.0, 20.0]),
            grasped_shape=shape,
            books=(pt.BookParams(shape, 0.0, 0.0, 0.0, 1.0, 1.0),),
            pairs=(
                ct.ProxyPair(ct.GRASPED, CornerId(1, 1), 0, 0),
                ct.ProxyPair(0, CornerId(1, -1), ct.GRASPED, 0),
            ),
        )
