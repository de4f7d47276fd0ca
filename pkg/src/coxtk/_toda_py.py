"""Numpy kernels for the discretized radial Toda system.

The grid is uniform in s = log x with spacing h; ``w`` has shape (J, n+1).
Equations are multiplied by x**2, so the interior row reads

    (w[j+1] - 2 w[j] + w[j-1]) / h**2 - 2 x**2 (e^{-2 a_i} - e^{-2 a_{i+1}})

with a_i = w_{i-1} - w_i.  Row 0 uses a ghost node from the slope condition
w_s = -m_i + corr_i, and row J-1 is the Dirichlet condition w = 0.
"""

from __future__ import annotations

import numpy as np


def _exps(w):
    a = np.roll(w, 1, axis=1) - w
    return a, np.exp(-2.0 * a)


def slope_correction(w0, x0sq, inv_p):
    """Integrated nonlinear term below x_min; inv_p holds 1/p_i (0 where p_i <= 0)."""
    _, e = _exps(w0[None, :])
    t = e[0] * inv_p
    return 2.0 * x0sq * (t - np.roll(t, -1))


def residual(w, x2, h, m, inv_p):
    J, s = w.shape
    a, _ = _exps(w)
    em = np.expm1(-2.0 * a)
    nl = 2.0 * x2[:, None] * (em - np.roll(em, -1, axis=1))
    r = np.empty_like(w)
    r[1:-1] = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / (h * h) - nl[1:-1]
    g = m - slope_correction(w[0], x2[0], inv_p)
    r[0] = (2.0 * w[1] - 2.0 * w[0]) / (h * h) + 2.0 * g / h - nl[0]
    r[-1] = w[-1]
    return r


def jacobian_banded(w, x2, h, m, inv_p):
    """Jacobian of :func:`residual` in LAPACK banded layout, bandwidth n+1 each side."""
    J, s = w.shape
    size = J * s
    ab = np.zeros((2 * s + 1, size))
    _, e = _exps(w)
    en = np.roll(e, -1, axis=1)
    x2c = x2[:, None]
    rows = np.arange(size).reshape(J, s)
    ii = np.arange(s)

    def put(r, c, v):
        ab[s + r - c, c] += v

    # -dN/dw for the three cyclic neighbours within a node
    d_prev = 4.0 * x2c * e
    d_self = -4.0 * x2c * (e + en)
    d_next = 4.0 * x2c * en
    # slope-correction derivative enters row 0 through -2/h * corr
    ip = inv_p
    ipn = np.roll(ip, -1)
    c0 = -2.0 / h * 2.0 * x2[0]
    corr_prev = c0 * (-2.0 * e[0] * ip)
    corr_self = c0 * (2.0 * e[0] * ip + 2.0 * en[0] * ipn)
    corr_next = c0 * (-2.0 * en[0] * ipn)

    body = slice(0, J - 1)
    r = rows[body]
    put(r, rows[body][:, (ii - 1) % s], d_prev[body])
    put(r, r, d_self[body])
    put(r, rows[body][:, (ii + 1) % s], d_next[body])
    put(rows[0], rows[0][(ii - 1) % s], corr_prev)
    put(rows[0], rows[0], corr_self)
    put(rows[0], rows[0][(ii + 1) % s], corr_next)

    hh = 1.0 / (h * h)
    mid = rows[1:-1]
    put(mid, mid, -2.0 * hh)
    put(mid, rows[2:], hh)
    put(mid, rows[:-2], hh)
    put(rows[0], rows[0], -2.0 * hh)
    put(rows[0], rows[1], 2.0 * hh)
    put(rows[-1], rows[-1], 1.0)
    return ab
