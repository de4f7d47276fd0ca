# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the discretized radial Toda system.

Same contract as :mod:`coxtk._toda_py`; loops are fused so each node is
visited once.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1

cnp.import_array()


def residual(w_in, x2_in, double h, m_in, inv_p_in):
    cdef const double[:, ::1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef const double[::1] x2 = np.ascontiguousarray(x2_in, dtype=np.float64)
    cdef const double[::1] m = np.ascontiguousarray(m_in, dtype=np.float64)
    cdef const double[::1] ip = np.ascontiguousarray(inv_p_in, dtype=np.float64)
    cdef Py_ssize_t J = w.shape[0], s = w.shape[1], j, i, im, ip1
    out = np.empty((J, s), dtype=np.float64)
    cdef double[:, ::1] r = out
    cdef double hh = 1.0 / (h * h), nl, ai, an, corr, ei, en
    for j in range(J - 1):
        for i in range(s):
            im = i - 1 if i > 0 else s - 1
            ip1 = i + 1 if i < s - 1 else 0
            ai = w[j, im] - w[j, i]
            an = w[j, i] - w[j, ip1]
            nl = 2.0 * x2[j] * (expm1(-2.0 * ai) - expm1(-2.0 * an))
            if j == 0:
                ei = exp(-2.0 * ai) * ip[i]
                en = exp(-2.0 * an) * ip[ip1]
                corr = 2.0 * x2[0] * (ei - en)
                r[0, i] = (2.0 * w[1, i] - 2.0 * w[0, i]) * hh + 2.0 * (m[i] - corr) / h - nl
            else:
                r[j, i] = (w[j + 1, i] - 2.0 * w[j, i] + w[j - 1, i]) * hh - nl
    for i in range(s):
        r[J - 1, i] = w[J - 1, i]
    return out


def jacobian_banded(w_in, x2_in, double h, m_in, inv_p_in):
    cdef const double[:, ::1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef const double[::1] x2 = np.ascontiguousarray(x2_in, dtype=np.float64)
    cdef const double[::1] ip = np.ascontiguousarray(inv_p_in, dtype=np.float64)
    cdef Py_ssize_t J = w.shape[0], s = w.shape[1], j, i, im, ip1, row
    out = np.zeros((2 * s + 1, J * s), dtype=np.float64)
    cdef double[:, ::1] ab = out
    cdef double hh = 1.0 / (h * h), ei, en, c0
    c0 = -4.0 * x2[0] / h
    for j in range(J - 1):
        for i in range(s):
            im = i - 1 if i > 0 else s - 1
            ip1 = i + 1 if i < s - 1 else 0
            row = j * s + i
            ei = exp(-2.0 * (w[j, im] - w[j, i]))
            en = exp(-2.0 * (w[j, i] - w[j, ip1]))
            # entry (row, col) lives at ab[s + row - col, col]
            ab[s + i - im, j * s + im] += 4.0 * x2[j] * ei
            ab[s, row] += -4.0 * x2[j] * (ei + en) - 2.0 * hh
            ab[s + i - ip1, j * s + ip1] += 4.0 * x2[j] * en
            if j == 0:
                ab[s + i - im, im] += c0 * (-2.0 * ei * ip[i])
                ab[s, row] += c0 * (2.0 * ei * ip[i] + 2.0 * en * ip[ip1])
                ab[s + i - ip1, ip1] += c0 * (-2.0 * en * ip[ip1])
                ab[0, row + s] += 2.0 * hh
            else:
                ab[0, row + s] += hh
                ab[2 * s, row - s] += hh
    for i in range(s):
        ab[s, (J - 1) * s + i] = 1.0
    return out
