"""Penalty contact between a body corner and a superellipse surface.

A contact is described by a proxy: an angular coordinate ``gamma`` selecting
a point ``p(gamma)`` on the partner's surface that chases the closest point
to the penetrating corner.  Contact stiffness blends smoothly from a free
residue ``k_min`` to a hard ``k_max`` as the corner's dimensionless signed
depth ``d = F(corner)`` goes from outside to inside:

    k(d) = k_min + (1 - tanh(d / d0)) / 2 * k_max

The energy of one proxy pair is ``0.5 * k(d) * ||c - p(gamma)||**2``, with
``d`` depending on the poses only, never on ``gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geometry, hyperdual as hm

__all__ = [
    "StiffnessProfile",
    "ProxyPair",
    "contact_stiffness",
    "signed_depth",
    "proxy_objective",
    "proxy_brute_force",
    "contact_energy",
]

#: owner/partner code for the manipulated (grasped) body in a ProxyPair
GRASPED = -1


@dataclass(frozen=True)
class StiffnessProfile:
    """Depth-dependent contact stiffness parameters.

    ``d0`` sets the width of the transition in units of the dimensionless
    inside-outside depth, not meters.
    """

    k_min: float = 1e-3
    k_max: float = 1e4
    d0: float = 0.05

    def __post_init__(self):
        if self.k_min <= 0.0 or self.k_max <= 0.0 or self.d0 <= 0.0:
            raise ValueError("stiffness profile parameters must be positive")
        if self.k_max < 100.0 * self.k_min:
            raise ValueError("k_max must be at least 100 * k_min")


@dataclass(frozen=True)
class ProxyPair:
    """One corner-vs-surface contact.

    ``owner`` and ``partner`` identify bodies: ``GRASPED`` (-1) is the
    manipulated book, non-negative integers index the shelf books.  The
    proxy angle lives on the partner's surface and occupies slot
    ``gamma_index`` of the scene state's proxy block.
    """

    owner: int
    corner: geometry.CornerId
    partner: int
    gamma_index: int

    def __post_init__(self):
        if self.owner == self.partner:
            raise ValueError("a proxy pair needs two distinct bodies")
        if self.owner < GRASPED or self.partner < GRASPED:
            raise ValueError("body codes are -1 (grasped) or shelf indices >= 0")
        if self.gamma_index < 0:
            raise ValueError("gamma_index must be non-negative")


def contact_stiffness(profile, d):
    """Evaluate k(d); accepts float or HD2 depth."""
    return profile.k_min + 0.5 * profile.k_max * (1.0 - hm.tanh(d / profile.d0))


def signed_depth(shape, point_body):
    """Dimensionless signed depth of a partner-frame point: F < 0 inside."""
    return geometry.inside_outside(shape, point_body)


def proxy_objective(shape, point_body, gamma):
    """Squared distance between the point and the surface point at ``gamma``.

    Shares its minimizer with the plain distance of the closest-point
    problem; the squared form is smooth through zero.
    """
    px, py = geometry.sq_point(shape, gamma)
    dx = point_body[0] - px
    dy = point_body[1] - py
    return dx * dx + dy * dy


def proxy_brute_force(shape, point_body, grid_n=720):
    """Closest-point angle by dense scan plus golden-section refinement.

    Serves as the independent oracle for proxy tracking: a full-circle grid
    (``grid_n >= 360``) locates the basin, then golden-section search narrows
    the minimizer to 1e-6 rad.  Returns the angle in (-pi, pi].
    """
    if grid_n < 360:
        raise ValueError("grid_n must be at least 360")
    best_g = 0.0
    best_f = math.inf
    step = 2.0 * math.pi / grid_n
    for i in range(grid_n):
        g = -math.pi + (i + 0.5) * step
        f = proxy_objective(shape, point_body, g)
        if f < best_f:
            best_f = f
            best_g = g
    lo = best_g - step
    hi = best_g + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = proxy_objective(shape, point_body, c)
    fd = proxy_objective(shape, point_body, d)
    while b - a > 1e-6:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = proxy_objective(shape, point_body, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = proxy_objective(shape, point_body, d)
    g = 0.5 * (a + b)
    if g > math.pi:
        g -= 2.0 * math.pi
    elif g <= -math.pi:
        g += 2.0 * math.pi
    return g


def contact_energy(profile, shape, point_body, gamma):
    """Penalty energy of one pair: ``0.5 * k(F(c)) * ||c - p(gamma)||**2``.

    ``point_body`` is the owner corner expressed in the partner's body frame;
    the stiffness depends on the corner depth only, so the energy is smooth
    in every argument.
    """
    d = signed_depth(shape, point_body)
    k = contact_stiffness(profile, d)
    return 0.5 * k * proxy_objective(shape, point_body, gamma)
