"""Post-hoc measurements on rollouts.

Everything here recomputes quantities from the sampled states rather than
trusting logged values, so the functions double as independent checks of the
integrator's own bookkeeping: contact depths and proxy-spring forces per
pair, insertion progress along the approach axis, goal errors and the
success verdict, which neighbor a policy pushes, and how the effort integral
splits between free-space and in-contact motion.
"""

from __future__ import annotations

import math

import numpy as np

from . import contact as ct
from .potential import _pose_of, _shape_of, control_force
from .rollout import Termination
from .geometry import corner_world, se2_inverse_transform

__all__ = [
    "insertion_axis",
    "insertion_depths",
    "pair_depths",
    "pair_forces",
    "book_displacements",
    "push_side",
    "goal_error",
    "is_success",
    "peak_planar_force",
    "free_space_phi_fraction",
]

#: success thresholds: final position error and final orientation error
POS_TOL = 5e-3
ANGLE_TOL = 0.05


def _scene_states(rollout):
    from .potential import SceneState

    params = rollout.params
    nb, npairs = params.n_books, params.n_pairs
    return [SceneState.from_flat(row, nb, npairs) for row in rollout.states]


def insertion_axis(dmp_params):
    """Unit planar direction from the start pose toward the goal."""
    d = np.asarray(dmp_params.goal, float)[:2] - np.asarray(dmp_params.u0, float)[:2]
    norm = float(np.hypot(d[0], d[1]))
    if norm < 1e-12:
        raise ValueError("start and goal coincide; no insertion axis")
    return d / norm


def insertion_depths(rollout, dmp_params):
    """Signed progress of the manipulated body along the insertion axis.

    Zero at the start pose, positive toward the goal; one value per sample.
    """
    axis = insertion_axis(dmp_params)
    u0 = np.asarray(dmp_params.u0, float)[:2]
    return (rollout.states[:, 0:2] - u0) @ axis


def pair_depths(rollout):
    """Dimensionless signed corner depth per contact pair, per sample.

    Negative means the owner corner is inside the partner surface; shape
    ``(n_samples, n_pairs)``.
    """
    params = rollout.params
    out = np.empty((len(rollout.states), params.n_pairs))
    for i, st in enumerate(_scene_states(rollout)):
        zb = list(st.zb)
        books = [tuple(r) for r in st.books]
        for j, pair in enumerate(params.pairs):
            cw = corner_world(
                _pose_of(pair.owner, zb, books, params),
                _shape_of(pair.owner, params),
                pair.corner,
            )
            cb = se2_inverse_transform(_pose_of(pair.partner, zb, books, params), cw)
            out[i, j] = ct.signed_depth(_shape_of(pair.partner, params), cb)
    return out


def pair_forces(rollout):
    """Contact spring force magnitude ``k(d) * |c - p(gamma)|`` per pair.

    Shape ``(n_samples, n_pairs)``; this is the force the penalty spring
    transmits between the corner and its surface proxy.
    """
    params = rollout.params
    out = np.empty((len(rollout.states), params.n_pairs))
    for i, st in enumerate(_scene_states(rollout)):
        zb = list(st.zb)
        books = [tuple(r) for r in st.books]
        for j, pair in enumerate(params.pairs):
            shape = _shape_of(pair.partner, params)
            cw = corner_world(
                _pose_of(pair.owner, zb, books, params),
                _shape_of(pair.owner, params),
                pair.corner,
            )
            cb = se2_inverse_transform(_pose_of(pair.partner, zb, books, params), cw)
            k = ct.contact_stiffness(params.profile, ct.signed_depth(shape, cb))
            dist = math.sqrt(ct.proxy_objective(shape, cb, st.gammas[pair.gamma_index]))
            out[i, j] = k * dist
    return out


def book_displacements(rollout):
    """Shelf-book x displacement from rest per sample, shape ``(n, n_books)``."""
    params = rollout.params
    rest = np.array([b.rest_x for b in params.books])
    cols = [3 + 2 * b for b in range(params.n_books)]
    return rollout.states[:, cols] - rest


def push_side(rollout):
    """Which neighbor the policy displaces more: ``"left"`` or ``"right"``.

    The neighbor with the larger peak |x displacement| decides; sides are
    named by the books' rest positions.
    """
    params = rollout.params
    if params.n_books < 2:
        raise ValueError("push side needs at least two shelf books")
    peaks = np.max(np.abs(book_displacements(rollout)), axis=0)
    winner = int(np.argmax(peaks))
    order = np.argsort([b.rest_x for b in params.books])
    return "left" if winner == order[0] else "right"


def goal_error(rollout, dmp_params):
    """(planar position error, absolute orientation error) at the end."""
    zb = rollout.final.state.zb
    goal = np.asarray(dmp_params.goal, float)
    pos = float(np.hypot(zb[0] - goal[0], zb[1] - goal[1]))
    ang = abs(float(zb[2] - goal[2]))
    return pos, ang


def is_success(rollout, dmp_params, pos_tol=POS_TOL, angle_tol=ANGLE_TOL):
    """Completed the movement and ended within the goal tolerances."""
    if rollout.termination is not Termination.COMPLETED:
        return False
    pos, ang = goal_error(rollout, dmp_params)
    return pos < pos_tol and ang < angle_tol


def peak_planar_force(rollout):
    """Largest planar control-force magnitude over the rollout."""
    f = rollout.forces
    if len(f) == 0:
        return 0.0
    return float(np.max(np.hypot(f[:, 0], f[:, 1])))


def free_space_phi_fraction(rollout, clearance=5.0):
    """Share of the effort integral accumulated away from any contact.

    A segment between consecutive samples counts as free when every pair's
    signed depth stays above ``clearance * d0`` at both ends.  Scenes with no
    contact pairs are free everywhere, fraction 1.
    """
    if rollout.phi_end <= 0.0:
        return 0.0
    if rollout.params.n_pairs == 0:
        return 1.0
    depths = pair_depths(rollout)
    threshold = clearance * rollout.params.profile.d0
    clear = np.min(depths, axis=1) > threshold
    dphi = np.diff(rollout.phis)
    free = clear[:-1] & clear[1:]
    return float(np.sum(dphi[free]) / rollout.phis[-1])
