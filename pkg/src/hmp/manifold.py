"""Equilibrium states, the tracking vector field, and path effort.

A control pose u pins the scene through the stationarity condition
grad_z W(z, u) = 0.  As u moves, the equilibrium moves with it; this module
solves for equilibria directly (damped Newton), exposes the tracking field
that rollouts integrate, and measures control effort through the felt
stiffness G_m = H_uu - H_uz H_zz^-1 H_zu: the 3x3 matrix relating a control
displacement to the reaction force change at the handle.  Effort along a
path is the integral of ||G_m du||, so stiff directions cost more than soft
ones and free-space motion costs almost nothing.

Tracking is only meaningful while the equilibrium stays stable, i.e. while
H_zz stays positive definite.  det(H_zz) shrinking to a threshold lambda is
the signal that the branch is about to disappear; callers treat that as a
hard boundary (det >= lambda is admissible, strictly below is not).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import potential
from .errors import BranchViolation, NonConvergence, SingularHessian


@dataclass(frozen=True)
class ManifoldConfig:
    """Settings for equilibrium solving and tracking.

    eta is the relaxation gain that pulls numerically drifted states back
    onto the equilibrium set while tracking.  lambda_det is the stability
    margin on det(H_zz); 0 admits everything up to exact singularity.
    equilibrium_tol is the infinity-norm bound on the residual force
    grad_z W accepted as "at equilibrium".
    """

    eta: float = 50.0
    lambda_det: float = 0.0
    equilibrium_tol: float = 1e-2
    max_relax_steps: int = 200


def solve_equilibrium(state, u, params, config=None, engine="fast"):
    """Newton-solve grad_z W(z, u) = 0 starting from ``state``.

    Returns a new SceneState at the equilibrium.  Raises NonConvergence if
    the residual does not reach tolerance, BranchViolation if the converged
    point sits on an unstable branch (det(H_zz) below the configured margin,
    or H_zz not positive definite).
    """
    cfg = config or ManifoldConfig()
    n = params.n_state
    work = state.copy()
    mu = 0.0
    resid = np.inf
    for _ in range(cfg.max_relax_steps):
        # nearest-point angles are cheap to solve exactly and nearly
        # degenerate along flat faces; keeping them globally fresh spares the
        # Newton line search from those directions
        if params.n_pairs:
            work = refresh_proxies(work, params)
        z = work.flatten()
        w, grad, hess = potential.derivatives(work, u, params, engine=engine)
        g = grad[:n]
        hzz = hess[:n, :n]
        resid = float(np.max(np.abs(g)))
        if resid < cfg.equilibrium_tol:
            eigs = np.linalg.eigvalsh(0.5 * (hzz + hzz.T))
            floor = 1e-9 * max(1.0, float(eigs[-1]))
            if eigs[0] < -floor:
                raise BranchViolation(
                    f"equilibrium is not stable (min Hessian eigenvalue {eigs[0]:.3g})"
                )
            _check_branch(eigs, cfg.lambda_det)
            return work
        step = None
        while step is None:
            try:
                step = np.linalg.solve(hzz + mu * np.eye(n), -g)
            except np.linalg.LinAlgError:
                mu = 1e-6 if mu == 0.0 else mu * 10.0
                if mu > 1e12:
                    raise NonConvergence(
                        f"equilibrium Hessian unusable (residual {resid:.3g})"
                    ) from None
        alpha = 1.0
        accepted = False
        while alpha >= 1e-6:
            trial = z + alpha * step
            trial_state = work.from_flat(trial, params.n_books, params.n_pairs)
            w_t, grad_t, _ = potential.derivatives(trial_state, u, params, engine=engine)
            resid_t = float(np.max(np.abs(grad_t[:n])))
            # progress on either merit is progress: the residual shrinking
            # (near the solution) or the energy dropping (long approaches)
            if resid_t < resid * (1.0 - 1e-4 * alpha) or w_t < w - 1e-12 * (1.0 + abs(w)):
                work = trial_state
                accepted = True
                mu = mu / 10.0 if mu > 1e-12 else 0.0
                break
            alpha *= 0.5
        if not accepted:
            # Newton direction unproductive: damp harder and retry
            mu = 1e-3 if mu == 0.0 else mu * 10.0
            if mu > 1e12:
                break
    raise NonConvergence(
        f"no equilibrium within {cfg.max_relax_steps} steps "
        f"(residual {resid:.3g}, tol {cfg.equilibrium_tol:.3g})"
    )


def refresh_proxies(state, params):
    """Re-solve every proxy angle globally for the current body poses.

    Returns a new state whose gamma entries are the brute-force nearest-point
    angles; body poses are untouched.  Use this to initialize proxies and to
    recover when a proxy has settled on the wrong stationary branch.
    """
    from . import contact as ct
    from . import geometry

    out = state.copy()
    for pair in params.pairs:
        owner_pose = potential._pose_of(pair.owner, out.zb, out.books, params)
        partner_pose = potential._pose_of(pair.partner, out.zb, out.books, params)
        cw = geometry.corner_world(
            owner_pose, potential._shape_of(pair.owner, params), pair.corner
        )
        cb = geometry.se2_inverse_transform(partner_pose, cw)
        out.gammas[pair.gamma_index] = ct.proxy_brute_force(
            potential._shape_of(pair.partner, params), cb
        )
    return out


def _check_branch(eigs, lambda_det):
    det = float(np.prod(eigs))
    if det < lambda_det:
        raise BranchViolation(
            f"stability margin violated: det {det:.3g} < {lambda_det:.3g}"
        )


def control_hessian(state, u, params, engine="fast"):
    """The felt-stiffness matrix and the state-Hessian determinant.

    Returns ``(G_m, det_hzz)`` with G_m = H_uu - H_uz H_zz^-1 H_zu.  Raises
    SingularHessian when H_zz cannot be inverted.
    """
    hzz, huz, huu = potential.second_derivatives(state, u, params, engine=engine)
    try:
        x = np.linalg.solve(hzz, huz.T)
    except np.linalg.LinAlgError as exc:
        raise SingularHessian("state Hessian is singular at this configuration") from exc
    gm = huu - huz @ x
    det = float(np.linalg.det(hzz))
    return 0.5 * (gm + gm.T), det


def haptic_obstacle_ok(det_hzz, lambda_det):
    """True while the stability margin holds; the boundary itself is admissible."""
    return det_hzz >= lambda_det


def adaptive_rhs(state, u, udot, params, config=None, engine="fast"):
    """Time derivative of z while tracking the moving equilibrium.

    Differentiating grad_z W(z(t), u(t)) = 0 gives the exact tracking term
    -H_zz^-1 H_zu u_dot; the eta term relaxes any residual the integrator
    has accumulated back toward the equilibrium set.
    """
    cfg = config or ManifoldConfig()
    n = params.n_state
    _, grad, hess = potential.derivatives(state, u, params, engine=engine)
    hzz = hess[:n, :n]
    hzu = hess[:n, n:]
    rhs = hzu @ np.asarray(udot, dtype=float) + cfg.eta * grad[:n]
    try:
        return -np.linalg.solve(hzz, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularHessian("state Hessian is singular at this configuration") from exc


def haptic_path_distance(metrics, controls):
    """Effort of a sampled control path under the felt-stiffness metric.

    ``metrics`` is a sequence of 3x3 G_m samples, ``controls`` the matching
    control poses.  Each interval contributes ||mean(G_i, G_i+1) @ du||, so
    the sum depends only on the traversed path, not on timing.
    """
    metrics = [np.asarray(g, dtype=float) for g in metrics]
    controls = np.asarray(controls, dtype=float)
    if len(metrics) != len(controls):
        raise ValueError("one metric sample per control sample required")
    total = 0.0
    for i in range(len(controls) - 1):
        du = controls[i + 1] - controls[i]
        gbar = 0.5 * (metrics[i] + metrics[i + 1])
        total += float(np.linalg.norm(gbar @ du))
    return total
