"""The manipulation potential W(z, u) and its exact derivatives.

The scene state ``z`` stacks, in fixed order: the grasped book's SE(2) pose,
``(x, theta)`` for each shelf book (their y positions are fixed shelf data),
and one proxy angle per contact pair.  ``u`` is the 3-DOF control pose the
grasp spring pulls toward.

    W = 0.5 (u - z_b)^T K_c (u - z_b)                 grasp spring
      + 0.5 (z_b - r_b)^T K_a (z_b - r_b)             optional anchor spring
      + sum_i 0.5 k_ix (x_i - rx_i)^2
             + 0.5 k_it (th_i - rt_i)^2               shelf resistance
      + sum_pairs 0.5 k(d) ||c - p(gamma)||^2          penalty contacts

Angle differences are plain (unwrapped) subtractions; headings stay well
inside one revolution by the workspace bounds.

Derivatives come from one of two interchangeable engines: the compiled fast
path in :mod:`hmp.kernel` (default) or the HD2 reference in this module.
Tests pin both to each other at 1e-10 and to central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import contact as ct
from . import geometry, hyperdual as hm
from .geometry import Pose2, Superellipse

__all__ = [
    "BookParams",
    "PotentialParams",
    "SceneState",
    "w_total",
    "grad_z",
    "second_derivatives",
    "control_force",
    "derivatives_reference",
]


@dataclass(frozen=True)
class BookParams:
    """A shelf book: shape, fixed depth coordinate, rest pose, resistance."""

    shape: Superellipse
    y: float
    rest_x: float
    rest_theta: float
    k_x: float
    k_theta: float


@dataclass(frozen=True)
class PotentialParams:
    """Everything W needs besides the state: shapes, springs, contact pairs."""

    k_c: np.ndarray
    grasped_shape: Superellipse
    books: tuple[BookParams, ...] = ()
    pairs: tuple[ct.ProxyPair, ...] = ()
    profile: ct.StiffnessProfile = field(default_factory=ct.StiffnessProfile)
    anchor_k: np.ndarray = None
    anchor_rest: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "k_c", np.asarray(self.k_c, dtype=float))
        if self.k_c.shape != (3,) or not np.all(self.k_c > 0.0):
            raise ValueError("k_c must be three positive stiffnesses")
        ak = np.zeros(3) if self.anchor_k is None else np.asarray(self.anchor_k, float)
        ar = np.zeros(3) if self.anchor_rest is None else np.asarray(self.anchor_rest, float)
        if ak.shape != (3,) or ar.shape != (3,) or np.any(ak < 0.0):
            raise ValueError("anchor spring needs 3 non-negative stiffnesses and a rest pose")
        object.__setattr__(self, "anchor_k", ak)
        object.__setattr__(self, "anchor_rest", ar)
        seen = set()
        for p in self.pairs:
            for code, role in ((p.owner, "owner"), (p.partner, "partner")):
                if code >= len(self.books):
                    raise ValueError(f"proxy pair {role} index {code} has no shelf book")
            if p.gamma_index in seen:
                raise ValueError(f"gamma_index {p.gamma_index} used twice")
            seen.add(p.gamma_index)
        if self.pairs and sorted(seen) != list(range(len(self.pairs))):
            raise ValueError("gamma indices must cover 0..n_pairs-1")

    @property
    def n_books(self):
        return len(self.books)

    @property
    def n_pairs(self):
        return len(self.pairs)

    @property
    def n_state(self):
        return 3 + 2 * len(self.books) + len(self.pairs)

    def state_labels(self):
        labels = ["zb_x", "zb_y", "zb_theta"]
        for i in range(len(self.books)):
            labels += [f"b{i}_x", f"b{i}_theta"]
        labels += [f"g{j}" for j in range(len(self.pairs))]
        return labels


@dataclass
class SceneState:
    """Concrete scene configuration matching a PotentialParams layout."""

    zb: np.ndarray
    books: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        self.zb = np.asarray(self.zb, dtype=float).reshape(3)
        self.books = np.asarray(self.books, dtype=float).reshape(-1, 2)
        self.gammas = np.asarray(self.gammas, dtype=float).reshape(-1)

    @property
    def n(self):
        return 3 + 2 * self.books.shape[0] + self.gammas.shape[0]

    def flatten(self):
        return np.concatenate([self.zb, self.books.reshape(-1), self.gammas])

    @classmethod
    def from_flat(cls, vec, n_books, n_pairs):
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (3 + 2 * n_books + n_pairs,):
            raise ValueError("flat state length does not match the layout")
        zb = vec[:3].copy()
        books = vec[3 : 3 + 2 * n_books].reshape(n_books, 2).copy()
        gammas = vec[3 + 2 * n_books :].copy()
        return cls(zb, books, gammas)

    def copy(self):
        return SceneState(self.zb.copy(), self.books.copy(), self.gammas.copy())


def _pose_of(code, zb_elems, book_elems, params):
    """Body pose for an owner/partner code, generic over the scalar type."""
    if code == ct.GRASPED:
        return Pose2(zb_elems[0], zb_elems[1], zb_elems[2])
    bx, bth = book_elems[code]
    return Pose2(bx, params.books[code].y, bth)


def _shape_of(code, params):
    return params.grasped_shape if code == ct.GRASPED else params.books[code].shape


def _w_generic(zb_elems, book_elems, gamma_elems, u_elems, params):
    """Assemble W from scalar elements that may be floats or HD2 numbers."""
    w = 0.0
    for i in range(3):
        du = u_elems[i] - zb_elems[i]
        w = w + 0.5 * params.k_c[i] * du * du
        if params.anchor_k[i] != 0.0:
            da = zb_elems[i] - params.anchor_rest[i]
            w = w + 0.5 * params.anchor_k[i] * da * da
    for i, bp in enumerate(params.books):
        dx = book_elems[i][0] - bp.rest_x
        dt = book_elems[i][1] - bp.rest_theta
        w = w + 0.5 * bp.k_x * dx * dx + 0.5 * bp.k_theta * dt * dt
    for pair in params.pairs:
        owner_pose = _pose_of(pair.owner, zb_elems, book_elems, params)
        partner_pose = _pose_of(pair.partner, zb_elems, book_elems, params)
        cw = geometry.corner_world(owner_pose, _shape_of(pair.owner, params), pair.corner)
        cb = geometry.se2_inverse_transform(partner_pose, cw)
        w = w + ct.contact_energy(
            params.profile, _shape_of(pair.partner, params), cb, gamma_elems[pair.gamma_index]
        )
    return w


def w_total(state, u, params):
    """Potential energy at a concrete state; plain float arithmetic."""
    u = np.asarray(u, dtype=float)
    return float(
        _w_generic(
            list(state.zb), [tuple(row) for row in state.books], list(state.gammas), list(u), params
        )
    )


def derivatives_reference(state, u, params):
    """(W, gradient, Hessian) over the stacked (z, u) vector via the HD2 engine.

    Returns ``(w, grad, hess)`` with ``grad`` of length ``N + 3`` and the
    Hessian ``(N+3, N+3)``; the z block comes first, u occupies the last
    three slots.
    """
    u = np.asarray(u, dtype=float)
    n = params.n_state
    m = n + 3
    flat = state.flatten()
    zvars = hm.seed(flat, m=m)
    uvars = hm.seed(u, m=m, offset=n)
    nb = params.n_books
    zb_e = zvars[:3]
    book_e = [(zvars[3 + 2 * i], zvars[4 + 2 * i]) for i in range(nb)]
    gamma_e = zvars[3 + 2 * nb :]
    w = _w_generic(zb_e, book_e, gamma_e, uvars, params)
    if isinstance(w, hm.HD2):
        return w.v, w.g, w.h
    return float(w), np.zeros(m), np.zeros((m, m))


def _derivs(state, u, params, engine):
    if engine == "reference":
        return derivatives_reference(state, u, params)
    if engine == "fast":
        from . import kernel

        return kernel.derivatives(state, u, params)
    raise ValueError(f"unknown derivative engine: {engine!r}")


def derivatives(state, u, params, engine="fast"):
    """(W, gradient, Hessian) over stacked (z, u); one engine pass."""
    return _derivs(state, u, params, engine)


def grad_z(state, u, params, engine="fast"):
    """Exact gradient of W with respect to the flattened state z."""
    n = params.n_state
    return _derivs(state, u, params, engine)[1][:n]


def second_derivatives(state, u, params, engine="fast"):
    """Exact Hessian blocks ``(H_zz, H_uz, H_uu)``.

    ``H_zz`` is ``(N, N)``, ``H_uz`` is ``(3, N)`` (mixed u-row/z-column
    block), ``H_uu`` is ``(3, 3)``.
    """
    n = params.n_state
    h = _derivs(state, u, params, engine)[2]
    return h[:n, :n], h[n:, :n], h[n:, n:]


def control_force(state, u, params):
    """Force the controller feels: ``-dW/du = K_c (z_b - u)``.

    Only the grasp spring involves u, so this closed form is exact; the test
    suite checks it against both derivative engines.
    """
    u = np.asarray(u, dtype=float)
    return params.k_c * (state.zb - u)
