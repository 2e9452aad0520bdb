"""Smooth control trajectories from a small weight matrix.

The control pose follows a second-order attractor toward the goal pose,
shaped by a radial-basis forcing term that fades with a decaying phase
variable x (1 at the start, x_end at the end of the movement).  With zero
weights the path is a critically damped straight approach; the weights
bend it without touching the endpoints, which makes them a convenient
low-dimensional search space for the optimizer.

    tau u' = v
    tau v' = alpha_v (beta_v (g - u) - v) + f(x)
    tau x' = -alpha_x x
    f_k(x) = (sum_b psi_b(x) theta_kb / sum_b psi_b(x)) * x * (g_k - u0_k)

The goal-displacement factor scales weights to the movement; a degenerate
axis (g_k = u0_k) substitutes 1 so the forcing stays controllable there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_PSI_FLOOR = 1e-15
_SCALE_FLOOR = 1e-9


@dataclass(frozen=True)
class DmpParams:
    """Movement shape: endpoints, timing, and the basis layout.

    spacing picks where the basis functions sit: "time" places them evenly
    over the movement's duration (geometric in phase), "phase" evenly over
    the phase interval itself, which front-loads them heavily in time.
    """

    u0: np.ndarray
    goal: np.ndarray
    duration: float = 10.0
    n_basis: int = 10
    alpha_v: float = 25.0
    beta_v: float = 6.25
    x_end: float = 1e-3
    spacing: str = "time"
    width_overlap: float = 0.75
    centers: np.ndarray = field(init=False, repr=False)
    widths: np.ndarray = field(init=False, repr=False)
    scale: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        u0 = np.asarray(self.u0, dtype=float).reshape(3)
        goal = np.asarray(self.goal, dtype=float).reshape(3)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "goal", goal)
        if self.duration <= 0.0:
            raise ValueError("duration must be positive")
        if self.n_basis < 2:
            raise ValueError("need at least two basis functions")
        if not 0.0 < self.x_end < 1.0:
            raise ValueError("x_end must lie in (0, 1)")
        if self.alpha_v <= 0.0 or self.beta_v <= 0.0:
            raise ValueError("attractor gains must be positive")
        if self.spacing == "time":
            centers = np.exp(-self.alpha_x * np.linspace(0.0, 1.0, self.n_basis))
        elif self.spacing == "phase":
            centers = np.linspace(1.0, self.x_end, self.n_basis)
        else:
            raise ValueError(f"unknown basis spacing: {self.spacing!r}")
        gaps = np.abs(np.diff(centers))
        widths = self.width_overlap * np.append(gaps, gaps[-1])
        scale = goal - u0
        scale = np.where(np.abs(scale) < _SCALE_FLOOR, 1.0, scale)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "scale", scale)

    @property
    def tau(self):
        return self.duration

    @property
    def alpha_x(self):
        return float(np.log(1.0 / self.x_end))

    def zero_theta(self):
        return np.zeros((3, self.n_basis))

    def check_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (3, self.n_basis):
            raise ValueError(
                f"theta must have shape (3, {self.n_basis}), got {theta.shape}"
            )
        return theta


@dataclass
class DmpState:
    u: np.ndarray
    v: np.ndarray
    x: float

    def copy(self):
        return DmpState(self.u.copy(), self.v.copy(), self.x)


def initial_state(params):
    return DmpState(params.u0.copy(), np.zeros(3), 1.0)


def forcing(params, theta, x):
    """The basis-weighted forcing at phase x; shape (3,)."""
    theta = params.check_theta(theta)
    dx = x - params.centers
    psi = np.exp(-0.5 * dx * dx / (params.widths * params.widths))
    den = _PSI_FLOOR + float(np.sum(psi))
    return (theta @ psi) / den * x * params.scale


def rhs(params, theta, state):
    """Time derivatives (du, dv, dx) of the attractor system."""
    f = forcing(params, theta, state.x)
    du = state.v / params.tau
    dv = (
        params.alpha_v * (params.beta_v * (params.goal - state.u) - state.v) + f
    ) / params.tau
    dxp = -params.alpha_x * state.x / params.tau
    return du, dv, dxp


def step(params, theta, state, dt):
    """One classical Runge-Kutta step of the attractor system."""
    def at(s, h, k):
        return DmpState(s.u + h * k[0], s.v + h * k[1], s.x + h * k[2])

    k1 = rhs(params, theta, state)
    k2 = rhs(params, theta, at(state, 0.5 * dt, k1))
    k3 = rhs(params, theta, at(state, 0.5 * dt, k2))
    k4 = rhs(params, theta, at(state, dt, k3))
    u = state.u + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    v = state.v + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    x = state.x + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    return DmpState(u, v, x)


def rollout_controls(params, theta, dt):
    """Integrate the control path over the full duration.

    Returns (times, controls) with controls of shape (n_steps + 1, 3).
    """
    n_steps = int(round(params.duration / dt))
    state = initial_state(params)
    times = np.empty(n_steps + 1)
    controls = np.empty((n_steps + 1, 3))
    times[0] = 0.0
    controls[0] = state.u
    for i in range(n_steps):
        state = step(params, theta, state, dt)
        times[i + 1] = (i + 1) * dt
        controls[i + 1] = state.u
    return times, controls
