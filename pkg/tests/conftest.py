"""Shared fixtures and independent numeric oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from hmp import contact as ct
from hmp import potential as pt
from hmp.geometry import CornerId, Superellipse

BOOK_SHAPE = Superellipse(a1=0.02, a2=0.11, eps=0.2)


def make_bookshelf_params(
    k_left=(350.0, 20.0), k_right=(350.0, 20.0), k_c=(800.0, 800.0, 20.0), gap=0.03
):
    """Crowded-shelf scene: two shelf books, four corner/surface pairs."""
    half = 0.5 * gap + BOOK_SHAPE.a1
    books = (
        pt.BookParams(BOOK_SHAPE, y=0.0, rest_x=-half, rest_theta=0.0,
                      k_x=k_left[0], k_theta=k_left[1]),
        pt.BookParams(BOOK_SHAPE, y=0.0, rest_x=half, rest_theta=0.0,
                      k_x=k_right[0], k_theta=k_right[1]),
    )
    pairs = (
        ct.ProxyPair(ct.GRASPED, CornerId(-1, 1), 0, 0),
        ct.ProxyPair(ct.GRASPED, CornerId(1, 1), 1, 1),
        ct.ProxyPair(0, CornerId(1, -1), ct.GRASPED, 2),
        ct.ProxyPair(1, CornerId(-1, -1), ct.GRASPED, 3),
    )
    return pt.PotentialParams(
        k_c=np.array(k_c),
        grasped_shape=BOOK_SHAPE,
        books=books,
        pairs=pairs,
        profile=ct.StiffnessProfile(),
    )


def make_chain_params(k_c=800.0, k_e=350.0):
    """1-D two-spring chain embedded as a bookless scene with an anchor."""
    return pt.PotentialParams(
        k_c=np.array([k_c, k_c, 20.0]),
        grasped_shape=BOOK_SHAPE,
        anchor_k=np.array([k_e, k_e, k_e]),
        anchor_rest=np.zeros(3),
    )


def random_scene_state(params, rng, spread=1.0):
    """A plausible random configuration: near-shelf poses, free proxy angles."""
    zb = np.array(
        [
            rng.uniform(-0.08, 0.08),
            rng.uniform(-0.30, -0.08),
            rng.uniform(-0.4, 0.4),
        ]
    ) * spread
    books = np.empty((params.n_books, 2))
    for i, bp in enumerate(params.books):
        books[i, 0] = bp.rest_x + rng.uniform(-0.01, 0.01) * spread
        books[i, 1] = bp.rest_theta + rng.uniform(-0.15, 0.15) * spread
    gammas = rng.uniform(-np.pi, np.pi, size=params.n_pairs)
    return pt.SceneState(zb, books, gammas)


def random_control(state, rng):
    return state.zb + rng.uniform(-0.05, 0.05, size=3)


# -- finite-difference oracles ----------------------------------------------


def fd_gradient(f, x, h=1e-5):
    """Central differences with Richardson extrapolation, per coordinate.

    The default step balances truncation against round-off for function
    values up to O(100); entries below the round-off floor eps*f/h are not
    resolvable and must be compared with a norm-relative floor.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(x.size):
        hi = h * max(1.0, abs(x[i]))
        out[i] = _fd1_richardson(f, x, i, hi)
    return out


def _fd1_richardson(f, x, i, h):
    def d(step):
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        return (f(xp) - f(xm)) / (2.0 * step)

    coarse = d(h)
    fine = d(0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def fd_hessian(f, x, h=1e-3):
    """Symmetric second differences with Richardson extrapolation."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.empty((n, n))
    steps = [h * max(1.0, abs(x[i])) for i in range(n)]

    def second(i, j, hi, hj):
        if i == j:
            xp = x.copy(); xm = x.copy()
            xp[i] += hi; xm[i] -= hi
            return (f(xp) - 2.0 * f(x) + f(xm)) / (hi * hi)
        xpp = x.copy(); xpm = x.copy(); xmp = x.copy(); xmm = x.copy()
        xpp[i] += hi; xpp[j] += hj
        xpm[i] += hi; xpm[j] -= hj
        xmp[i] -= hi; xmp[j] += hj
        xmm[i] -= hi; xmm[j] -= hj
        return (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * hi * hj)

    for i in range(n):
        for j in range(i, n):
            coarse = second(i, j, steps[i], steps[j])
            fine = second(i, j, 0.5 * steps[i], 0.5 * steps[j])
            val = (4.0 * fine - coarse) / 3.0
            out[i, j] = val
            out[j, i] = val
    return out


def rel_err(a, b, norm_floor=1e-6):
    """Max elementwise relative error, floored at a fraction of the norm.

    Entries much smaller than the array's dominant scale sit below the
    finite-difference noise floor; comparing them against a floor of
    ``norm_floor * max(1, ||b||_inf)`` keeps the check meaningful there
    while staying strict on every resolvable entry.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not a.size:
        return 0.0
    floor = norm_floor * max(1.0, float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b) / (np.abs(b) + floor)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
