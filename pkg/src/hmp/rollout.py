"""Quasi-static rollouts: integrate the scene along a commanded control path.

The augmented state stacks the control attractor (u, v, x), the scene
configuration z, and the accumulated effort phi into one vector integrated
with classical Runge-Kutta.  Object coordinates follow the moving
equilibrium (tracking term plus residual relaxation); proxy angles follow a
curvature-normalized flow toward their nearest-point solutions; effort
accumulates as ||G_m v||.

A rollout ends in one of four ways: it runs the full movement (completed),
the stability margin det(H_zz) >= lambda breaks (obstacle), a coordinate
leaves the workspace box, or the state stops being finite.  Cost is the
final effort plus a penalty on the remaining distance to the goal pose, so
failed and stalled attempts rank behind clean insertions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import dmp as dmp_mod
from . import kernel, runio
from .potential import SceneState, control_force

#: converts an orientation gap to a position-equivalent gap in the goal
#: distance (half a typical body height in meters per radian)
ANGLE_TO_METERS = 0.1


class Termination(enum.Enum):
    COMPLETED = "completed"
    OBSTACLE = "obstacle"
    WORKSPACE = "workspace"
    NONFINITE = "nonfinite"


_TERM_FROM_CODE = {
    kernel.TERM_COMPLETED: Termination.COMPLETED,
    kernel.TERM_OBSTACLE: Termination.OBSTACLE,
    kernel.TERM_WORKSPACE: Termination.WORKSPACE,
    kernel.TERM_NONFINITE: Termination.NONFINITE,
}


@dataclass(frozen=True)
class RolloutConfig:
    """Integration settings.

    newton_step_fraction ties the residual relaxation gain to the step size
    (eta = fraction / dt), so refining dt tightens equilibrium tracking
    instead of merely slowing it.  penalty_weight converts the final goal
    distance into cost units; None means "not resolved yet" and only blocks
    cost evaluation, not integration.
    """

    dt: float = 1e-3
    export_stride: int = 10
    newton_step_fraction: float = 0.05
    alpha_p: float = 1e3
    proxy_flow: str = "newton"
    gamma_rate_cap: float = 100.0
    workspace_pos: float = 0.5
    workspace_angle: float = math.pi / 2.0
    workspace_zb: tuple | None = None
    penalty_weight: float | None = None

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.export_stride < 1:
            raise ValueError("export_stride must be at least 1")
        if self.proxy_flow not in ("newton", "gradient"):
            raise ValueError(f"unknown proxy flow: {self.proxy_flow!r}")
        if self.newton_step_fraction <= 0.0:
            raise ValueError("newton_step_fraction must be positive")

    @property
    def eta_for_dt(self):
        return self.newton_step_fraction / self.dt


@dataclass
class Checkpoint:
    """Everything needed to continue a rollout mid-movement."""

    t: float
    u: np.ndarray
    v: np.ndarray
    x: float
    state: SceneState
    phi: float


@dataclass
class Rollout:
    """Sampled trajectory plus how and when it ended."""

    times: np.ndarray
    controls: np.ndarray
    velocities: np.ndarray
    states: np.ndarray
    forces: np.ndarray
    dets: np.ndarray
    phis: np.ndarray
    termination: Termination
    t_end: float
    max_residual: float
    final: Checkpoint
    params: object = field(repr=False)
    config: RolloutConfig = field(repr=False)

    @property
    def phi_end(self):
        return float(self.phis[-1]) if len(self.phis) else 0.0

    def checkpoint(self):
        return Checkpoint(
            self.final.t,
            self.final.u.copy(),
            self.final.v.copy(),
            self.final.x,
            self.final.state.copy(),
            self.final.phi,
        )


def workspace_bounds(params, config):
    """(lo, hi) arrays over the scene state; proxy angles are unbounded."""
    n = params.n_state
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    pos, ang = config.workspace_pos, config.workspace_angle
    lo[0:2] = -pos
    hi[0:2] = pos
    lo[2] = -ang
    hi[2] = ang
    if config.workspace_zb is not None:
        # Per-coordinate box on the grasped pose overrides the scalar bounds.
        for i, (a, b) in enumerate(config.workspace_zb):
            lo[i] = a
            hi[i] = b
    for b in range(params.n_books):
        lo[3 + 2 * b] = -pos
        hi[3 + 2 * b] = pos
        lo[4 + 2 * b] = -ang
        hi[4 + 2 * b] = ang
    return lo, hi


def integrate(state0, theta, params, dmp_params, config=None, lambda_det=0.0,
              start=None, until=None):
    """Run the scene forward under the weighted control path.

    state0 is the scene configuration at the start (proxies included);
    start optionally resumes from a Checkpoint (its state overrides state0);
    until stops integration early at that time instead of the full duration.
    """
    config = config or RolloutConfig()
    theta = dmp_params.check_theta(theta)
    n = params.n_state
    ny = n + 8
    if start is not None:
        t0 = start.t
        u0, v0, x0 = start.u, start.v, start.x
        z0 = start.state.flatten()
        phi0 = start.phi
    else:
        t0 = 0.0
        u0, v0, x0 = dmp_params.u0, np.zeros(3), 1.0
        z0 = state0.flatten()
        phi0 = 0.0
    t_stop = dmp_params.duration if until is None else min(until, dmp_params.duration)
    n_steps = max(int(round((t_stop - t0) / config.dt)), 0)
    y0 = np.empty(ny)
    y0[kernel.IU : kernel.IU + 3] = u0
    y0[kernel.IV : kernel.IV + 3] = v0
    y0[kernel.IX] = x0
    y0[kernel.IZ : kernel.IZ + n] = z0
    y0[kernel.IZ + n] = phi0

    pk = kernel.pack(params)
    ws_lo, ws_hi = workspace_bounds(params, config)
    cap = n_steps // config.export_stride + 8
    samp_t = np.zeros(cap)
    samp_u = np.zeros((cap, 3))
    samp_v = np.zeros((cap, 3))
    samp_z = np.zeros((cap, n))
    samp_f = np.zeros((cap, 3))
    samp_det = np.zeros(cap)
    samp_phi = np.zeros(cap)

    ns, code, t_end, max_resid, y_final = kernel._rollout(
        y0, t0, n_steps, config.dt, config.export_stride,
        theta, dmp_params.centers, dmp_params.widths, dmp_params.goal,
        dmp_params.scale, dmp_params.tau, dmp_params.alpha_v,
        dmp_params.beta_v, dmp_params.alpha_x,
        pk.kc, pk.ak, pk.ar, pk.book_y, pk.book_rest, pk.book_k,
        pk.pair_c, pk.pair_q, pk.loc2glob, pk.loc_const, pk.profile,
        lambda_det, config.eta_for_dt, config.alpha_p,
        config.proxy_flow == "newton", config.gamma_rate_cap, ws_lo, ws_hi,
        samp_t, samp_u, samp_v, samp_z, samp_f, samp_det, samp_phi,
    )
    final_state = SceneState.from_flat(
        y_final[kernel.IZ : kernel.IZ + n], params.n_books, params.n_pairs
    )
    final = Checkpoint(
        t=float(t_end),
        u=y_final[kernel.IU : kernel.IU + 3].copy(),
        v=y_final[kernel.IV : kernel.IV + 3].copy(),
        x=float(y_final[kernel.IX]),
        state=final_state,
        phi=float(y_final[kernel.IZ + n]),
    )
    return Rollout(
        times=samp_t[:ns].copy(),
        controls=samp_u[:ns].copy(),
        velocities=samp_v[:ns].copy(),
        states=samp_z[:ns].copy(),
        forces=samp_f[:ns].copy(),
        dets=samp_det[:ns].copy(),
        phis=samp_phi[:ns].copy(),
        termination=_TERM_FROM_CODE[int(code)],
        t_end=float(t_end),
        max_residual=float(max_resid),
        final=final,
        params=params,
        config=config,
    )


def augmented_rhs(y, theta, params, dmp_params, config, engine="reference"):
    """Reference time derivative of the augmented state; mirrors the kernel.

    Kept in plain numpy so the compiled loop has an independently readable
    twin; the test suite integrates both and compares trajectories.
    """
    from . import potential

    n = params.n_state
    u = y[kernel.IU : kernel.IU + 3]
    v = y[kernel.IV : kernel.IV + 3]
    x = float(y[kernel.IX])
    z = y[kernel.IZ : kernel.IZ + n]
    state = SceneState.from_flat(z, params.n_books, params.n_pairs)
    _, grad, hess = potential.derivatives(state, u, params, engine=engine)
    g = grad[:n]
    hzz = hess[:n, :n]

    dy = np.zeros_like(y)
    f = dmp_mod.forcing(dmp_params, theta, x)
    du = v / dmp_params.tau
    dy[kernel.IU : kernel.IU + 3] = du
    dy[kernel.IV : kernel.IV + 3] = (
        dmp_params.alpha_v * (dmp_params.beta_v * (dmp_params.goal - u) - v) + f
    ) / dmp_params.tau
    dy[kernel.IX] = -dmp_params.alpha_x * x / dmp_params.tau

    eta = config.eta_for_dt
    b = eta * g
    b[:3] += -params.k_c * du
    sol = np.linalg.solve(hzz, b)
    nobj = 3 + 2 * params.n_books
    dy[kernel.IZ : kernel.IZ + nobj] = -sol[:nobj]
    for i in range(nobj, n):
        if config.proxy_flow == "newton":
            den = max(abs(hzz[i, i]), 1e-12)
            rate = -config.alpha_p * g[i] / den
        else:
            rate = -config.alpha_p * g[i]
        dy[kernel.IZ + i] = float(np.clip(rate, -config.gamma_rate_cap, config.gamma_rate_cap))

    kc = params.k_c
    binv = np.linalg.solve(hzz, np.eye(n)[:, :3])[:3, :]
    gm = np.diag(kc) - np.diag(kc) @ binv @ np.diag(kc)
    dy[kernel.IZ + n] = float(np.linalg.norm(gm @ v))
    return dy


def goal_distance(state, goal):
    """Pose gap between the handled body and the goal control pose."""
    d = state.zb - np.asarray(goal, dtype=float)
    return float(math.hypot(d[0], d[1], ANGLE_TO_METERS * d[2]))


def cost(rollout, dmp_params, penalty_weight=None):
    """Effort, plus the penalized remaining goal distance on early termination.

    A completed rollout is charged its effort alone; a rollout cut short by
    any guard also pays ``weight`` per unit of leftover body-to-goal distance
    so that failures rank behind successes while still rewarding progress.
    """
    if rollout.termination is Termination.COMPLETED:
        return rollout.phi_end
    weight = penalty_weight
    if weight is None:
        weight = rollout.config.penalty_weight
    if weight is None:
        raise ValueError("penalty weight not resolved; set RolloutConfig.penalty_weight")
    return rollout.phi_end + weight * goal_distance(rollout.final.state, dmp_params.goal)


def export_rollout(rollout, directory, basename="rollout", meta=None):
    """Write the sampled trajectory as CSV plus a JSON sidecar.

    The CSV columns are: t, the control pose, every scene coordinate by its
    label, the control spring force, det(H_zz), and accumulated effort.
    Floats are written with repr (shortest round-trip), so re-running a
    deterministic rollout reproduces the files byte for byte.  ``meta``
    entries (scenario hash, seed, and the like) are merged into the sidecar.
    """
    params = rollout.params
    labels = params.state_labels()
    header = (
        ["t", "u_x", "u_y", "u_theta"]
        + labels
        + ["f_ctrl_x", "f_ctrl_y", "f_ctrl_tau", "det_Hzz", "phi"]
    )
    lines = [",".join(header)]
    for i in range(len(rollout.times)):
        row = (
            [rollout.times[i]]
            + list(rollout.controls[i])
            + list(rollout.states[i])
            + list(rollout.forces[i])
            + [rollout.dets[i], rollout.phis[i]]
        )
        lines.append(",".join(repr(float(v)) for v in row))
    csv_path = runio.atomic_write_text(
        f"{directory}/{basename}.csv", "\n".join(lines) + "\n"
    )
    sidecar = {
        "termination": rollout.termination.value,
        "t_end": rollout.t_end,
        "phi_end": rollout.phi_end,
        "max_residual": rollout.max_residual,
        "dt": rollout.config.dt,
        "export_stride": rollout.config.export_stride,
        "n_samples": int(len(rollout.times)),
        "columns": header,
    }
    if meta:
        sidecar.update(meta)
    json_path = runio.atomic_write_text(
        f"{directory}/{basename}.json", runio.canonical_json(sidecar)
    )
    return csv_path, json_path
