# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops; :mod:`plpdim._kernels_py` is the reference fallback."""
import numpy as np

from libc.math cimport cos, sin, exp, sqrt, M_PI
from libc.stdint cimport int64_t

def ccdf_trapezoid(const double[:, ::1] mu, const int64_t[::1] ms, Py_ssize_t panels):
    """Conditional CCDF P(Gamma >= M) for each profile row and each M.

    Trapezoid rule with ``panels`` panels on [0, pi] applied to the closed-form
    inversion integral. With cos(x - q) = cos x cos q + sin x sin q every
    M-dependent factor goes into two tables shared by all rows, so a row
    costs one exp and one sin/cos pair per node plus two dot products per M.
    """
    cdef Py_ssize_t n_rows = mu.shape[0], n_max = mu.shape[1], n_m = ms.shape[0]
    cdef Py_ssize_t nodes = panels + 1
    out_arr = np.empty((n_rows, n_m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[:, ::1] ctab = np.empty((nodes, n_max), dtype=np.float64)
    cdef double[:, ::1] stab = np.empty((nodes, n_max), dtype=np.float64)
    cdef double[:, ::1] atab = np.empty((n_m, nodes), dtype=np.float64)
    cdef double[:, ::1] btab = np.empty((n_m, nodes), dtype=np.float64)
    cdef double[::1] ec = np.empty(nodes, dtype=np.float64)
    cdef double[::1] es = np.empty(nodes, dtype=np.float64)
    cdef Py_ssize_t i, j, n, k
    cdef double total, theta, half, w, dk, p, q, val, acc, m, e
    with nogil:
        for j in range(nodes):
            theta = M_PI * j / panels
            for n in range(n_max):
                ctab[j, n] = cos((n + 1) * theta)
                stab[j, n] = sin((n + 1) * theta)
        for k in range(n_m):
            m = <double> ms[k]
            for j in range(nodes):
                w = 0.5 if (j == 0 or j == panels) else 1.0
                half = 0.5 * M_PI * j / panels
                # Dirichlet kernel sin(M t/2)/sin(t/2); its value at t = 0 is M
                dk = m if j == 0 else sin(m * half) / sin(half)
                atab[k, j] = w * dk * cos((m - 1.0) * half)
                btab[k, j] = w * dk * sin((m - 1.0) * half)
        for i in range(n_rows):
            total = 0.0
            for n in range(n_max):
                total = total + mu[i, n]
            for j in range(nodes):
                p = 0.0
                q = 0.0
                for n in range(n_max):
                    p = p + mu[i, n] * ctab[j, n]
                    q = q + mu[i, n] * stab[j, n]
                e = exp(p - total)
                ec[j] = e * cos(q)
                es[j] = e * sin(q)
            for k in range(n_m):
                if ms[k] <= 0:
                    out[i, k] = 1.0
                    continue
                acc = 0.0
                for j in range(nodes):
                    acc = acc + ec[j] * atab[k, j] + es[j] * btab[k, j]
                val = 1.0 - acc / panels
                if val < 0.0:
                    val = 0.0
                elif val > 1.0:
                    val = 1.0
                out[i, k] = val
    return out_arr


def chord_mass(const double[::1] r, const double[::1] radii):
    """sum_j sqrt(d^2 - r_j^2) over lines with r_j < d, for every d in ``radii``."""
    cdef Py_ssize_t n_lines = r.shape[0], n_d = radii.shape[0], j, k
    out_arr = np.zeros(n_d, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double d, acc
    with nogil:
        for k in range(n_d):
            d = radii[k]
            acc = 0.0
            for j in range(n_lines):
                if r[j] < d:
                    acc = acc + sqrt(d * d - r[j] * r[j])
            out[k] = acc
    return out_arr
