"""Compiled fast path: exact W derivatives and the rollout inner loop.

The scene potential is a sum of diagonal quadratics (grasp spring, anchor,
shelf resistance) and per-pair contact energies.  Quadratic derivatives are
accumulated in closed form.  Each contact term depends on at most seven
scalars (owner pose, partner pose, proxy angle), so its value, gradient and
Hessian are propagated through a fixed straight-line program of hyper-dual
operations over a 7-slot local space and scattered into the global arrays.
The recurrences are the same ones :mod:`hmp.hyperdual` implements; the test
suite pins both engines together at 1e-10.

Everything here is nopython/nogil so rollouts can run on worker threads
without holding the GIL, and deterministic: fixed iteration order, no
fastmath reassociation, no BLAS.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from . import contact as ct

#: local slot indices inside one contact pair's derivative space
_L = 7

#: termination codes shared with rollout.py
TERM_COMPLETED = 0
TERM_OBSTACLE = 1
TERM_WORKSPACE = 2
TERM_NONFINITE = 3

#: offsets inside the flat augmented rollout state [u, v, x, z..., phi]
IU, IV, IX, IZ = 0, 3, 6, 7

_TRIG_FLOOR = 1e-12


class Packed:
    """PotentialParams flattened into plain arrays for the jitted kernels."""

    __slots__ = (
        "n", "nb", "npair", "kc", "ak", "ar", "book_y", "book_rest", "book_k",
        "pair_c", "pair_q", "loc2glob", "loc_const", "profile",
    )

    def __init__(self, params):
        nb = params.n_books
        npair = params.n_pairs
        self.n = params.n_state
        self.nb = nb
        self.npair = npair
        self.kc = np.asarray(params.k_c, dtype=np.float64)
        self.ak = np.asarray(params.anchor_k, dtype=np.float64)
        self.ar = np.asarray(params.anchor_rest, dtype=np.float64)
        self.book_y = np.array([b.y for b in params.books], dtype=np.float64)
        self.book_rest = np.array(
            [[b.rest_x, b.rest_theta] for b in params.books], dtype=np.float64
        ).reshape(nb, 2)
        self.book_k = np.array(
            [[b.k_x, b.k_theta] for b in params.books], dtype=np.float64
        ).reshape(nb, 2)
        self.profile = np.array(
            [params.profile.k_min, params.profile.k_max, params.profile.d0],
            dtype=np.float64,
        )
        # per-pair geometric constants: c1, c2, q, inv_a1q, inv_a2q, neg_eps_half
        self.pair_c = np.zeros((npair, 2), dtype=np.float64)
        self.pair_q = np.zeros((npair, 4), dtype=np.float64)
        self.loc2glob = np.full((npair, _L), -1, dtype=np.int64)
        self.loc_const = np.zeros((npair, _L), dtype=np.float64)
        for p, pair in enumerate(params.pairs):
            oshape = (
                params.grasped_shape if pair.owner == ct.GRASPED
                else params.books[pair.owner].shape
            )
            pshape = (
                params.grasped_shape if pair.partner == ct.GRASPED
                else params.books[pair.partner].shape
            )
            self.pair_c[p, 0] = pair.corner.sx * oshape.a1
            self.pair_c[p, 1] = pair.corner.sy * oshape.a2
            q = 2.0 / pshape.eps
            self.pair_q[p, 0] = q
            self.pair_q[p, 1] = pshape.a1 ** (-q)
            self.pair_q[p, 2] = pshape.a2 ** (-q)
            self.pair_q[p, 3] = -pshape.eps / 2.0
            for role, code, base in ((0, pair.owner, 0), (1, pair.partner, 3)):
                if code == ct.GRASPED:
                    self.loc2glob[p, base + 0] = 0
                    self.loc2glob[p, base + 1] = 1
                    self.loc2glob[p, base + 2] = 2
                else:
                    self.loc2glob[p, base + 0] = 3 + 2 * code
                    self.loc2glob[p, base + 2] = 4 + 2 * code
                    self.loc_const[p, base + 1] = params.books[code].y
            self.loc2glob[p, 6] = 3 + 2 * nb + pair.gamma_index


def pack(params):
    return Packed(params)


# -- hyper-dual straight-line ops over the 7-slot arena ----------------------
#
# V[k] holds values, G[k, :] gradients, H[k, :, :] Hessians of node k with
# respect to the seven local variables.


@njit(cache=True, inline="always")
def _leaf(V, G, H, k, val, active):
    V[k] = val
    for i in range(_L):
        G[k, i] = 0.0
        for j in range(_L):
            H[k, i, j] = 0.0
    if active >= 0:
        G[k, active] = 1.0


@njit(cache=True, inline="always")
def _lin2(V, G, H, k, a, ca, b, cb, c0):
    V[k] = ca * V[a] + cb * V[b] + c0
    for i in range(_L):
        G[k, i] = ca * G[a, i] + cb * G[b, i]
        for j in range(_L):
            H[k, i, j] = ca * H[a, i, j] + cb * H[b, i, j]


@njit(cache=True, inline="always")
def _lin3(V, G, H, k, a, ca, b, cb, c, cc, c0):
    V[k] = ca * V[a] + cb * V[b] + cc * V[c] + c0
    for i in range(_L):
        G[k, i] = ca * G[a, i] + cb * G[b, i] + cc * G[c, i]
        for j in range(_L):
            H[k, i, j] = ca * H[a, i, j] + cb * H[b, i, j] + cc * H[c, i, j]


@njit(cache=True, inline="always")
def _affine(V, G, H, k, a, ca, c0):
    V[k] = ca * V[a] + c0
    for i in range(_L):
        G[k, i] = ca * G[a, i]
        for j in range(_L):
            H[k, i, j] = ca * H[a, i, j]


@njit(cache=True, inline="always")
def _mul(V, G, H, k, a, b):
    va = V[a]
    vb = V[b]
    V[k] = va * vb
    for i in range(_L):
        G[k, i] = va * G[b, i] + vb * G[a, i]
    for i in range(_L):
        gai = G[a, i]
        gbi = G[b, i]
        for j in range(_L):
            H[k, i, j] = (
                va * H[b, i, j] + vb * H[a, i, j] + gai * G[b, j] + gbi * G[a, j]
            )


@njit(cache=True, inline="always")
def _chain(V, G, H, k, a, f0, f1, f2):
    V[k] = f0
    for i in range(_L):
        G[k, i] = f1 * G[a, i]
    for i in range(_L):
        gai = G[a, i]
        for j in range(_L):
            H[k, i, j] = f1 * H[a, i, j] + f2 * gai * G[a, j]


@njit(cache=True, inline="always")
def _sin(V, G, H, k, a):
    s = np.sin(V[a])
    c = np.cos(V[a])
    _chain(V, G, H, k, a, s, c, -s)


@njit(cache=True, inline="always")
def _cos(V, G, H, k, a):
    s = np.sin(V[a])
    c = np.cos(V[a])
    _chain(V, G, H, k, a, c, -s, -c)


@njit(cache=True, inline="always")
def _tanh_scaled(V, G, H, k, a, inv_d0):
    t = np.tanh(V[a] * inv_d0)
    sech2 = 1.0 - t * t
    _chain(V, G, H, k, a, t, inv_d0 * sech2, -2.0 * inv_d0 * inv_d0 * t * sech2)


@njit(cache=True, inline="always")
def _powabs(V, G, H, k, a, q, floor):
    va = V[a]
    av = abs(va)
    s = 0.0
    if va > 0.0:
        s = 1.0
    elif va < 0.0:
        s = -1.0
    ac = av if av > floor else floor
    if ac == 0.0:
        _chain(V, G, H, k, a, 0.0, 0.0, 0.0)
    else:
        f = ac**q
        f1 = q * s * ac ** (q - 1.0)
        f2 = q * (q - 1.0) * ac ** (q - 2.0)
        _chain(V, G, H, k, a, f, f1, f2)


@njit(cache=True, inline="always")
def _pow_const(V, G, H, k, a, p):
    va = V[a]
    f = va**p
    f1 = p * va ** (p - 1.0)
    f2 = p * (p - 1.0) * va ** (p - 2.0)
    _chain(V, G, H, k, a, f, f1, f2)


@njit(cache=True)
def _w_derivs(z, u, kc, ak, ar, book_y, book_rest, book_k, pair_c, pair_q,
              loc2glob, loc_const, profile, V, G, H, grad, hess):
    """W value plus gradient/Hessian w.r.t. z, accumulated into grad/hess."""
    n = z.shape[0]
    nb = book_rest.shape[0]
    npair = pair_c.shape[0]
    for i in range(n):
        grad[i] = 0.0
        for j in range(n):
            hess[i, j] = 0.0
    w = 0.0
    # grasp spring and optional anchor on the grasped pose
    for i in range(3):
        du = u[i] - z[i]
        w += 0.5 * kc[i] * du * du
        grad[i] += -kc[i] * du
        hess[i, i] += kc[i]
        if ak[i] != 0.0:
            da = z[i] - ar[i]
            w += 0.5 * ak[i] * da * da
            grad[i] += ak[i] * da
            hess[i, i] += ak[i]
    # shelf book resistance springs
    for b in range(nb):
        ix = 3 + 2 * b
        dx = z[ix] - book_rest[b, 0]
        dth = z[ix + 1] - book_rest[b, 1]
        w += 0.5 * book_k[b, 0] * dx * dx + 0.5 * book_k[b, 1] * dth * dth
        grad[ix] += book_k[b, 0] * dx
        grad[ix + 1] += book_k[b, 1] * dth
        hess[ix, ix] += book_k[b, 0]
        hess[ix + 1, ix + 1] += book_k[b, 1]
    # contact pairs
    k_min = profile[0]
    k_max = profile[1]
    inv_d0 = 1.0 / profile[2]
    for p in range(npair):
        # leaves: slots 0..6 are [ox, oy, oth, px, py, pth, gamma]
        for l in range(_L):
            gidx = loc2glob[p, l]
            if gidx >= 0:
                _leaf(V, G, H, l, z[gidx], l)
            else:
                _leaf(V, G, H, l, loc_const[p, l], -1)
        c1 = pair_c[p, 0]
        c2 = pair_c[p, 1]
        q = pair_q[p, 0]
        ia1q = pair_q[p, 1]
        ia2q = pair_q[p, 2]
        neh = pair_q[p, 3]
        _cos(V, G, H, 7, 2)                      # cos(owner theta)
        _sin(V, G, H, 8, 2)
        _lin3(V, G, H, 9, 0, 1.0, 7, c1, 8, -c2, 0.0)    # corner world x
        _lin3(V, G, H, 10, 1, 1.0, 8, c1, 7, c2, 0.0)    # corner world y
        _cos(V, G, H, 11, 5)                     # cos(partner theta)
        _sin(V, G, H, 12, 5)
        _lin2(V, G, H, 13, 9, 1.0, 3, -1.0, 0.0)         # rel x
        _lin2(V, G, H, 14, 10, 1.0, 4, -1.0, 0.0)        # rel y
        _mul(V, G, H, 15, 11, 13)
        _mul(V, G, H, 16, 12, 14)
        _lin2(V, G, H, 17, 15, 1.0, 16, 1.0, 0.0)        # corner body x
        _mul(V, G, H, 18, 12, 13)
        _mul(V, G, H, 19, 11, 14)
        _lin2(V, G, H, 20, 19, 1.0, 18, -1.0, 0.0)       # corner body y
        _powabs(V, G, H, 21, 17, q, 0.0)
        _powabs(V, G, H, 22, 20, q, 0.0)
        _lin2(V, G, H, 23, 21, ia1q, 22, ia2q, -1.0)     # signed depth d
        _tanh_scaled(V, G, H, 24, 23, inv_d0)
        _affine(V, G, H, 25, 24, -0.5 * k_max, k_min + 0.5 * k_max)  # k(d)
        _cos(V, G, H, 26, 6)
        _sin(V, G, H, 27, 6)
        _powabs(V, G, H, 28, 26, q, _TRIG_FLOOR)
        _powabs(V, G, H, 29, 27, q, _TRIG_FLOOR)
        _lin2(V, G, H, 30, 28, ia1q, 29, ia2q, 0.0)      # angular sum S
        _pow_const(V, G, H, 31, 30, neh)                 # r = S^(-eps/2)
        _mul(V, G, H, 32, 31, 26)                        # proxy body x
        _mul(V, G, H, 33, 31, 27)                        # proxy body y
        _lin2(V, G, H, 34, 17, 1.0, 32, -1.0, 0.0)       # separation x
        _lin2(V, G, H, 35, 20, 1.0, 33, -1.0, 0.0)       # separation y
        _mul(V, G, H, 36, 34, 34)
        _mul(V, G, H, 37, 35, 35)
        _lin2(V, G, H, 38, 36, 1.0, 37, 1.0, 0.0)        # squared distance
        _mul(V, G, H, 39, 25, 38)                        # k * dist^2
        w += 0.5 * V[39]
        for li in range(_L):
            gi = loc2glob[p, li]
            if gi < 0:
                continue
            grad[gi] += 0.5 * G[39, li]
            for lj in range(_L):
                gj = loc2glob[p, lj]
                if gj >= 0:
                    hess[gi, gj] += 0.5 * H[39, li, lj]
    return w


@njit(cache=True)
def _ldlt_factor(A, L, d):
    """LDL^T of a symmetric matrix; returns (ok, det).

    ``ok`` is False on pivot breakdown (|pivot| below 1e-300); ``det`` is the
    product of pivots accumulated so far either way.
    """
    n = A.shape[0]
    det = 1.0
    for j in range(n):
        s = A[j, j]
        for k in range(j):
            s -= L[j, k] * L[j, k] * d[k]
        d[j] = s
        det *= s
        if abs(s) < 1e-300:
            return False, det
        for i in range(j + 1, n):
            t = A[i, j]
            for k in range(j):
                t -= L[i, k] * L[j, k] * d[k]
            L[i, j] = t / s
        L[j, j] = 1.0
    return True, det


@njit(cache=True)
def _ldlt_solve(L, d, b, x):
    n = b.shape[0]
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= L[i, k] * x[k]
        x[i] = s
    for i in range(n):
        x[i] /= d[i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        for k in range(i + 1, n):
            s -= L[k, i] * x[k]
        x[i] = s


@njit(cache=True)
def _control_metric(L, d, kc, Gm, e, x):
    """G_m = K_c - K_c (Hzz^-1)_bb K_c from the factorized Hessian."""
    n = L.shape[0]
    for col in range(3):
        for i in range(n):
            e[i] = 0.0
        e[col] = 1.0
        _ldlt_solve(L, d, e, x)
        for row in range(3):
            Gm[row, col] = -kc[row] * kc[col] * x[row]
    for i in range(3):
        Gm[i, i] += kc[i]


def derivatives(state, u, params):
    """(W, gradient, Hessian) over stacked (z, u); fast-engine counterpart of
    :func:`hmp.potential.derivatives_reference`."""
    pk = pack(params)
    z = state.flatten()
    u = np.asarray(u, dtype=np.float64).reshape(3)
    n = pk.n
    V = np.zeros(40)
    G = np.zeros((40, _L))
    H = np.zeros((40, _L, _L))
    gz = np.zeros(n)
    hz = np.zeros((n, n))
    w = _w_derivs(z, u, pk.kc, pk.ak, pk.ar, pk.book_y, pk.book_rest, pk.book_k,
                  pk.pair_c, pk.pair_q, pk.loc2glob, pk.loc_const, pk.profile,
                  V, G, H, gz, hz)
    m = n + 3
    grad = np.zeros(m)
    hess = np.zeros((m, m))
    grad[:n] = gz
    hess[:n, :n] = hz
    grad[n:] = pk.kc * (u - z[:3])
    for i in range(3):
        hess[n + i, i] = -pk.kc[i]
        hess[i, n + i] = -pk.kc[i]
        hess[n + i, n + i] = pk.kc[i]
    return w, grad, hess


# -- the rollout loop --------------------------------------------------------


@njit(cache=True)
def _forcing(x, theta, centers, widths, scale, f_out):
    p = centers.shape[0]
    den = 1e-15
    for k in range(3):
        f_out[k] = 0.0
    for b in range(p):
        dxc = x - centers[b]
        psi = np.exp(-0.5 * dxc * dxc / (widths[b] * widths[b]))
        den += psi
        for k in range(3):
            f_out[k] += psi * theta[k, b]
    for k in range(3):
        f_out[k] = f_out[k] / den * x * scale[k]


@njit(cache=True)
def _scene_eval(z, u, kc, ak, ar, book_y, book_rest, book_k, pair_c, pair_q,
                loc2glob, loc_const, profile, V, G, H, grad, hess, L, dvec):
    """Derivatives plus factorization at one (z, u); returns (ok, det, resid)."""
    _w_derivs(z, u, kc, ak, ar, book_y, book_rest, book_k, pair_c, pair_q,
              loc2glob, loc_const, profile, V, G, H, grad, hess)
    ok, det = _ldlt_factor(hess, L, dvec)
    resid = 0.0
    for i in range(z.shape[0]):
        a = abs(grad[i])
        if a > resid:
            resid = a
    return ok, det, resid


@njit(cache=True)
def _rhs_from_eval(y, n, grad, hess, L, dvec, kc, tau, alpha_v, beta_v, alpha_x,
                   goal, theta, centers, widths, scale, eta, alpha_p, newton_flow,
                   rate_cap, nb, bvec, sol, fbuf, Gm, ebuf, xbuf, ky):
    """Fill ky with the augmented time derivative at flat state y."""
    _forcing(y[IX], theta, centers, widths, scale, fbuf)
    for k in range(3):
        ky[IU + k] = y[IV + k] / tau
        ky[IV + k] = (
            alpha_v * (beta_v * (goal[k] - y[IU + k]) - y[IV + k]) + fbuf[k]
        ) / tau
    ky[IX] = -alpha_x * y[IX] / tau
    # object rows: -Hzz^-1 (Hzu u_dot + eta grad)
    for i in range(n):
        bvec[i] = eta * grad[i]
    for i in range(3):
        bvec[i] += -kc[i] * ky[IU + i]
    _ldlt_solve(L, dvec, bvec, sol)
    nobj = 3 + 2 * nb
    for i in range(nobj):
        ky[IZ + i] = -sol[i]
    # proxy rows: curvature-normalized gradient flow
    for i in range(nobj, n):
        g = grad[i]
        if newton_flow:
            den = abs(hess[i, i])
            if den < 1e-12:
                den = 1e-12
            rate = -alpha_p * g / den
        else:
            rate = -alpha_p * g
        if rate > rate_cap:
            rate = rate_cap
        elif rate < -rate_cap:
            rate = -rate_cap
        ky[IZ + i] = rate
    # haptic accumulation
    _control_metric(L, dvec, kc, Gm, ebuf, xbuf)
    acc = 0.0
    for i in range(3):
        s = 0.0
        for j in range(3):
            s += Gm[i, j] * y[IV + j]
        acc += s * s
    ky[IZ + n] = np.sqrt(acc)


@njit(cache=True, nogil=True)
def _rollout(y0, t0, n_steps, dt, stride,
             theta, centers, widths, goal, scale, tau, alpha_v, beta_v, alpha_x,
             kc, ak, ar, book_y, book_rest, book_k, pair_c, pair_q, loc2glob,
             loc_const, profile,
             lambda_det, eta, alpha_p, newton_flow, rate_cap, ws_lo, ws_hi,
             samp_t, samp_u, samp_v, samp_z, samp_f, samp_det, samp_phi):
    """Integrate the augmented dynamics; returns (n_samp, term, t_end, max_resid, y_final)."""
    n = ws_lo.shape[0]
    nb = book_rest.shape[0]
    ny = y0.shape[0]
    V = np.zeros(40)
    G = np.zeros((40, _L))
    H = np.zeros((40, _L, _L))
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    L = np.zeros((n, n))
    dvec = np.zeros(n)
    bvec = np.zeros(n)
    sol = np.zeros(n)
    fbuf = np.zeros(3)
    Gm = np.zeros((3, 3))
    ebuf = np.zeros(n)
    xbuf = np.zeros(n)
    k1 = np.zeros(ny)
    k2 = np.zeros(ny)
    k3 = np.zeros(ny)
    k4 = np.zeros(ny)
    yw = np.zeros(ny)
    y = y0.copy()

    ok, det, resid = _scene_eval(y[IZ : IZ + n], y[IU : IU + 3], kc, ak, ar,
                                 book_y, book_rest, book_k, pair_c, pair_q,
                                 loc2glob, loc_const, profile, V, G, H, grad,
                                 hess, L, dvec)
    max_resid = resid
    ns = 0
    # record a sample from the current state and its evaluated pass
    samp_t[ns] = t0
    for k in range(3):
        samp_u[ns, k] = y[IU + k]
        samp_v[ns, k] = y[IV + k]
        samp_f[ns, k] = kc[k] * (y[IZ + k] - y[IU + k])
    for i in range(n):
        samp_z[ns, i] = y[IZ + i]
    samp_det[ns] = det
    samp_phi[ns] = y[IZ + n]
    ns += 1
    if not ok or det < lambda_det:
        return ns, TERM_OBSTACLE, t0, max_resid, y

    term = TERM_COMPLETED
    t = t0
    for step in range(n_steps):
        # stage 1 reuses the accepted evaluation
        _rhs_from_eval(y, n, grad, hess, L, dvec, kc, tau, alpha_v, beta_v,
                       alpha_x, goal, theta, centers, widths, scale, eta,
                       alpha_p, newton_flow, rate_cap, nb, bvec, sol, fbuf,
                       Gm, ebuf, xbuf, k1)
        failed = False
        for stage in range(3):
            if stage == 0:
                h = 0.5 * dt
                ks = k1
                kd = k2
            elif stage == 1:
                h = 0.5 * dt
                ks = k2
                kd = k3
            else:
                h = dt
                ks = k3
                kd = k4
            for i in range(ny):
                yw[i] = y[i] + h * ks[i]
            ok, det, resid = _scene_eval(yw[IZ : IZ + n], yw[IU : IU + 3], kc,
                                         ak, ar, book_y, book_rest, book_k,
                                         pair_c, pair_q, loc2glob, loc_const,
                                         profile, V, G, H, grad, hess, L, dvec)
            if not ok or det < lambda_det:
                failed = True
                break
            _rhs_from_eval(yw, n, grad, hess, L, dvec, kc, tau, alpha_v,
                           beta_v, alpha_x, goal, theta, centers, widths,
                           scale, eta, alpha_p, newton_flow, rate_cap, nb,
                           bvec, sol, fbuf, Gm, ebuf, xbuf, kd)
        if failed:
            term = TERM_OBSTACLE
            break
        for i in range(ny):
            yw[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        t_new = t + dt
        finite = True
        for i in range(ny):
            if not np.isfinite(yw[i]):
                finite = False
                break
        if not finite:
            term = TERM_NONFINITE
            break
        ok, det, resid = _scene_eval(yw[IZ : IZ + n], yw[IU : IU + 3], kc, ak,
                                     ar, book_y, book_rest, book_k, pair_c,
                                     pair_q, loc2glob, loc_const, profile, V,
                                     G, H, grad, hess, L, dvec)
        exited = False
        if not ok or det < lambda_det:
            term = TERM_OBSTACLE
            exited = True
        else:
            for i in range(n):
                if yw[IZ + i] < ws_lo[i] or yw[IZ + i] > ws_hi[i]:
                    term = TERM_WORKSPACE
                    exited = True
                    break
        for i in range(ny):
            y[i] = yw[i]
        t = t_new
        if resid > max_resid:
            max_resid = resid
        record = ((step + 1) % stride == 0) or (step == n_steps - 1) or exited
        if record:
            samp_t[ns] = t
            for k in range(3):
                samp_u[ns, k] = y[IU + k]
                samp_v[ns, k] = y[IV + k]
                samp_f[ns, k] = kc[k] * (y[IZ + k] - y[IU + k])
            for i in range(n):
                samp_z[ns, i] = y[IZ + i]
            samp_det[ns] = det
            samp_phi[ns] = y[IZ + n]
            ns += 1
        if exited:
            break
    if samp_t[ns - 1] != t:
        # a mid-step abort (stage failure, non-finite proposal) leaves the last
        # accepted state unrecorded; evaluate it once more for det and record
        ok, det, resid = _scene_eval(y[IZ : IZ + n], y[IU : IU + 3], kc, ak,
                                     ar, book_y, book_rest, book_k, pair_c,
                                     pair_q, loc2glob, loc_const, profile, V,
                                     G, H, grad, hess, L, dvec)
        samp_t[ns] = t
        for k in range(3):
            samp_u[ns, k] = y[IU + k]
            samp_v[ns, k] = y[IV + k]
            samp_f[ns, k] = kc[k] * (y[IZ + k] - y[IU + k])
        for i in range(n):
            samp_z[ns, i] = y[IZ + i]
        samp_det[ns] = det
        samp_phi[ns] = y[IZ + n]
        ns += 1
    return ns, term, t, max_resid, y
