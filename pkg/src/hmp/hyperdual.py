"""Second-order forward-mode differentiation on multivariate hyper-dual numbers.

An ``HD2`` value carries a function value together with its exact gradient and
Hessian with respect to a fixed set of ``m`` active inputs.  Propagating HD2
values through ordinary arithmetic yields machine-precision first and second
derivatives in a single evaluation pass; no finite-difference step sizes are
involved.

This module is the readable reference engine.  The compiled fast path in
``kernel.py`` re-implements the same recurrences for the hot loop and is
cross-checked against this one in the test suite.

The dispatching helpers (:func:`sin`, :func:`cos`, ...) accept either plain
floats or HD2 values, so formula code can be written once and evaluated in
both modes.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "HD2",
    "seed",
    "sin",
    "cos",
    "tanh",
    "sqrt",
    "exp",
    "log",
    "powabs",
    "value_of",
]


class HD2:
    """Value plus exact gradient and Hessian w.r.t. ``m`` active variables.

    Attributes:
        v: function value (float).
        g: gradient, shape ``(m,)``.
        h: Hessian, shape ``(m, m)``, kept symmetric by construction.
    """

    __slots__ = ("v", "g", "h")

    def __init__(self, v, g, h):
        self.v = float(v)
        self.g = g
        self.h = h

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(value, m):
        return HD2(value, np.zeros(m), np.zeros((m, m)))

    @staticmethod
    def variable(value, index, m):
        g = np.zeros(m)
        g[index] = 1.0
        return HD2(value, g, np.zeros((m, m)))

    def _coerce(self, other):
        if isinstance(other, HD2):
            return other
        m = self.g.shape[0]
        return HD2.constant(float(other), m)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return HD2(self.v + o.v, self.g + o.g, self.h + o.h)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return HD2(self.v - o.v, self.g - o.g, self.h - o.h)

    def __rsub__(self, other):
        o = self._coerce(other)
        return HD2(o.v - self.v, o.g - self.g, o.h - self.h)

    def __neg__(self):
        return HD2(-self.v, -self.g, -self.h)

    def __mul__(self, other):
        o = self._coerce(other)
        og = np.outer(self.g, o.g)
        return HD2(
            self.v * o.v,
            self.v * o.g + o.v * self.g,
            self.v * o.h + o.v * self.h + og + og.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o * self._reciprocal()

    def _reciprocal(self):
        iv = 1.0 / self.v
        return self._chain(iv, -iv * iv, 2.0 * iv * iv * iv)

    def __pow__(self, q):
        q = float(q)
        if self.v <= 0.0 and q != round(q):
            raise ValueError("non-integer power of a non-positive HD2 value")
        f = self.v**q
        f1 = q * self.v ** (q - 1.0)
        f2 = q * (q - 1.0) * self.v ** (q - 2.0)
        return self._chain(f, f1, f2)

    def _chain(self, f, f1, f2):
        """Univariate chain rule: returns ``f(self)`` given f, f', f'' at self.v."""
        og = np.outer(self.g, self.g)
        return HD2(f, f1 * self.g, f1 * self.h + f2 * og)

    # Comparisons look at values only (used for branch-free guards in callers).
    def __lt__(self, other):
        return self.v < value_of(other)

    def __gt__(self, other):
        return self.v > value_of(other)

    def __repr__(self):
        return f"HD2({self.v!r})"


def seed(values, m=None, offset=0):
    """Turn a flat sequence of floats into HD2 variables with consecutive indices.

    ``m`` defaults to ``len(values)``; ``offset`` shifts the variable indices,
    which lets a caller mix several seeded groups in one derivative space.
    """
    values = list(values)
    if m is None:
        m = len(values) + offset
    return [HD2.variable(v, offset + i, m) for i, v in enumerate(values)]


def value_of(x):
    return x.v if isinstance(x, HD2) else float(x)


# -- float/HD2 dispatching math helpers -------------------------------------


def sin(x):
    if isinstance(x, HD2):
        s, c = math.sin(x.v), math.cos(x.v)
        return x._chain(s, c, -s)
    return math.sin(x)


def cos(x):
    if isinstance(x, HD2):
        s, c = math.sin(x.v), math.cos(x.v)
        return x._chain(c, -s, -c)
    return math.cos(x)


def tanh(x):
    if isinstance(x, HD2):
        t = math.tanh(x.v)
        sech2 = 1.0 - t * t
        return x._chain(t, sech2, -2.0 * t * sech2)
    return math.tanh(x)


def sqrt(x):
    if isinstance(x, HD2):
        r = math.sqrt(x.v)
        return x._chain(r, 0.5 / r, -0.25 / (r * x.v))
    return math.sqrt(x)


def exp(x):
    if isinstance(x, HD2):
        e = math.exp(x.v)
        return x._chain(e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, HD2):
        iv = 1.0 / x.v
        return x._chain(math.log(x.v), iv, -iv * iv)
    return math.log(x)


def powabs(x, q, floor=1e-12):
    """``|x| ** q`` with the magnitude clamped below by ``floor``.

    Derivatives are taken through ``sign(x) * max(|x|, floor)``: exact wherever
    ``|x| >= floor`` and finite at the axis crossing even for ``q < 2``.
    """
    q = float(q)
    if isinstance(x, HD2):
        a = abs(x.v)
        s = 1.0 if x.v > 0.0 else (-1.0 if x.v < 0.0 else 0.0)
        ac = max(a, floor)
        if ac == 0.0:
            # degenerate point: treat the even extension's stationary center
            return x._chain(0.0, 0.0, 0.0)
        f = ac**q
        f1 = q * s * ac ** (q - 1.0)
        f2 = q * (q - 1.0) * ac ** (q - 2.0)
        return x._chain(f, f1, f2)
    return max(abs(x), floor) ** q
