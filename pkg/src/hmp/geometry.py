"""Planar poses and superellipse shapes.

All functions here are written against the scalar math helpers in
:mod:`hmp.hyperdual`, so they evaluate with plain floats or with HD2
derivative-carrying numbers unchanged.  Points are passed as ``(x, y)``
tuples for that reason.

A superellipse with half-extents ``a1, a2`` and roundness ``eps`` is the
level set

    (|x| / a1)**(2/eps) + (|y| / a2)**(2/eps) = 1

``eps = 1`` gives an ellipse; ``eps -> 0`` approaches the bounding
rectangle.  Magnitudes are used throughout so the expressions stay real in
every quadrant, and ``|cos|, |sin|`` are clamped away from zero before
exponentiation so derivative formulas stay finite for ``eps > 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import hyperdual as hm

__all__ = [
    "Pose2",
    "Superellipse",
    "CornerId",
    "CORNERS",
    "se2_transform",
    "se2_inverse_transform",
    "corner_world",
    "sq_radius",
    "sq_point",
    "inside_outside",
]

#: clamp applied to |cos gamma|, |sin gamma| before exponentiation
TRIG_FLOOR = 1e-12


@dataclass(frozen=True)
class Pose2:
    """SE(2) pose: translation (x, y) and heading theta in radians."""

    x: float
    y: float
    theta: float


@dataclass(frozen=True)
class Superellipse:
    """Superellipse shape parameters (half-extents and roundness)."""

    a1: float
    a2: float
    eps: float = 0.2

    def __post_init__(self):
        if not (self.a1 > 0.0 and self.a2 > 0.0):
            raise ValueError("superellipse half-extents must be positive")
        if not (0.0 < self.eps <= 2.0):
            raise ValueError("superellipse roundness eps must lie in (0, 2]")


@dataclass(frozen=True)
class CornerId:
    """One vertex of the shape's bounding rectangle, named by its sign pair.

    The corner sits at body coordinates ``(sx * a1, sy * a2)``.  These are
    rectangle vertices, not points of the superellipse boundary.
    """

    sx: int
    sy: int

    def __post_init__(self):
        if self.sx not in (-1, 1) or self.sy not in (-1, 1):
            raise ValueError("corner signs must be +1 or -1")


#: all four corners in a fixed order (++, +-, -+, --)
CORNERS = (
    CornerId(1, 1),
    CornerId(1, -1),
    CornerId(-1, 1),
    CornerId(-1, -1),
)


def se2_transform(pose, point):
    """Map a body-frame point to the world frame: ``R(theta) p + t``."""
    px, py = point
    c = hm.cos(pose.theta)
    s = hm.sin(pose.theta)
    return (pose.x + c * px - s * py, pose.y + s * px + c * py)


def se2_inverse_transform(pose, point):
    """Map a world-frame point into the body frame: ``R(-theta) (p - t)``."""
    rx = point[0] - pose.x
    ry = point[1] - pose.y
    c = hm.cos(pose.theta)
    s = hm.sin(pose.theta)
    return (c * rx + s * ry, -s * rx + c * ry)


def corner_world(pose, shape, corner):
    """World position of a bounding-rectangle vertex of ``shape`` at ``pose``."""
    return se2_transform(pose, (corner.sx * shape.a1, corner.sy * shape.a2))


def _angular_sum(shape, gamma):
    """S(gamma) = (|cos|/a1)**(2/eps) + (|sin|/a2)**(2/eps), clamped."""
    q = 2.0 / shape.eps
    cg = hm.cos(gamma)
    sg = hm.sin(gamma)
    return (
        hm.powabs(cg, q, TRIG_FLOOR) / shape.a1**q
        + hm.powabs(sg, q, TRIG_FLOOR) / shape.a2**q
    )


def sq_radius(shape, gamma):
    """Radial distance of the boundary point at polar angle ``gamma``.

    ``r(gamma) = S(gamma) ** (-eps/2)``: the exponent makes
    ``r(gamma) * (cos gamma, sin gamma)`` land exactly on the implicit
    surface for every roundness, e.g. ``r(0) = a1`` for any ``eps``.
    """
    return _angular_sum(shape, gamma) ** (-shape.eps / 2.0)


def sq_point(shape, gamma):
    """Boundary point at polar angle ``gamma``, in body coordinates."""
    r = sq_radius(shape, gamma)
    return (r * hm.cos(gamma), r * hm.sin(gamma))


def inside_outside(shape, point):
    """Implicit function F: negative inside, zero on the surface, positive outside.

    ``F(x, y) = (|x|/a1)**(2/eps) + (|y|/a2)**(2/eps) - 1``.  The value is the
    dimensionless signed depth used by the contact stiffness profile.
    """
    q = 2.0 / shape.eps
    px, py = point
    return (
        hm.powabs(px, q, 0.0) / shape.a1**q
        + hm.powabs(py, q, 0.0) / shape.a2**q
        - 1.0
    )
