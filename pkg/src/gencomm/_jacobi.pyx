# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic Jacobi sweep for complex Hermitian matrices.

Complex entries are handled as interleaved (re, im) doubles so the inner
loops avoid C99 complex multiplication helpers.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot

cnp.import_array()


cdef inline void _rot_cols(double[:, ::1] a, Py_ssize_t n, Py_ssize_t p, Py_ssize_t q,
                           double cs, double sn, double er, double ei) noexcept nogil:
    # [a_p, a_q] <- [cs*a_p - sn*e*a_q, sn*a_p + cs*e*a_q]
    cdef Py_ssize_t i
    cdef double pr, pi, qr, qi, eqr, eqi
    for i in range(n):
        pr = a[i, 2 * p]
        pi = a[i, 2 * p + 1]
        qr = a[i, 2 * q]
        qi = a[i, 2 * q + 1]
        eqr = er * qr - ei * qi
        eqi = er * qi + ei * qr
        a[i, 2 * p] = cs * pr - sn * eqr
        a[i, 2 * p + 1] = cs * pi - sn * eqi
        a[i, 2 * q] = sn * pr + cs * eqr
        a[i, 2 * q + 1] = sn * pi + cs * eqi


cdef inline void _rot_rows(double[:, ::1] a, Py_ssize_t n, Py_ssize_t p, Py_ssize_t q,
                           double cs, double sn, double er, double ei) noexcept nogil:
    # [a_p; a_q] <- [cs*a_p - sn*conj(e)*a_q; sn*a_p + cs*conj(e)*a_q]
    cdef Py_ssize_t j
    cdef double pr, pi, qr, qi, eqr, eqi
    for j in range(n):
        pr = a[p, 2 * j]
        pi = a[p, 2 * j + 1]
        qr = a[q, 2 * j]
        qi = a[q, 2 * j + 1]
        eqr = er * qr + ei * qi
        eqi = er * qi - ei * qr
        a[p, 2 * j] = cs * pr - sn * eqr
        a[p, 2 * j + 1] = cs * pi - sn * eqi
        a[q, 2 * j] = sn * pr + cs * eqr
        a[q, 2 * j + 1] = sn * pi + cs * eqi


cdef double _offdiag_sq(double[:, ::1] h, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            s += h[i, 2 * j] * h[i, 2 * j] + h[i, 2 * j + 1] * h[i, 2 * j + 1]
    return 2.0 * s


cdef int _jacobi_core(double[:, ::1] h, double[:, ::1] v, Py_ssize_t k, double tol,
                      int max_sweeps, bint vectors) noexcept nogil:
    # Returns the number of sweeps used, or -1 if the budget ran out.
    cdef Py_ssize_t p, q, i, j
    cdef int sweep = 0
    cdef double app, aqq, c_abs, theta, t, cs, sn, er, ei, fro_sq = 0.0, thresh, skip

    for i in range(k):
        for j in range(2 * k):
            fro_sq += h[i, j] * h[i, j]
    thresh = (tol * tol) * fro_sq
    # k^2 entries below this sum to under thresh, so skipping them is safe
    skip = thresh / <double>(k * k)

    while True:
        if _offdiag_sq(h, k) <= thresh:
            return sweep
        if sweep >= max_sweeps:
            return -1
        sweep += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                c_abs = hypot(h[p, 2 * q], h[p, 2 * q + 1])
                if c_abs * c_abs <= skip:
                    continue
                app = h[p, 2 * p]
                aqq = h[q, 2 * q]
                # e = conj(h_pq) / |h_pq|
                er = h[p, 2 * q] / c_abs
                ei = -h[p, 2 * q + 1] / c_abs
                theta = (aqq - app) / (2.0 * c_abs)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                cs = 1.0 / sqrt(t * t + 1.0)
                sn = t * cs
                _rot_cols(h, k, p, q, cs, sn, er, ei)
                _rot_rows(h, k, p, q, cs, sn, er, ei)
                h[p, 2 * q] = 0.0
                h[p, 2 * q + 1] = 0.0
                h[q, 2 * p] = 0.0
                h[q, 2 * p + 1] = 0.0
                h[p, 2 * p] = app - t * c_abs
                h[p, 2 * p + 1] = 0.0
                h[q, 2 * q] = aqq + t * c_abs
                h[q, 2 * q + 1] = 0.0
                if vectors:
                    _rot_cols(v, k, p, q, cs, sn, er, ei)


def jacobi_eigh(h_in, double tol=1e-14, int max_sweeps=64, bint vectors=True):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v, sweeps)`` with unsorted eigenvalues ``w``. ``v`` is
    ``None`` when ``vectors`` is false. ``sweeps`` is -1 on non-convergence.
    """
    harr = np.array(h_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t k = harr.shape[0], i
    cdef double[:, ::1] h = harr.view(np.float64)
    varr = np.eye(k, dtype=np.complex128)
    cdef double[:, ::1] v = varr.view(np.float64)
    cdef int sweeps
    with nogil:
        sweeps = _jacobi_core(h, v, k, tol, max_sweeps, vectors)
    w = np.empty(k, dtype=np.float64)
    for i in range(k):
        w[i] = h[i, 2 * i]
    return w, (varr if vectors else None), sweeps


def singular_values(x_in, double tol=1e-14, int max_sweeps=64):
    """Singular values of ``x`` as ``||x v_i||`` over the Jacobi eigenvectors
    of the smaller Gram matrix, descending.  Returns ``(sigma, sweeps)``."""
    x = np.asarray(x_in, dtype=np.complex128)
    if x.shape[0] < x.shape[1]:
        x = x.conj().T
    xarr = np.ascontiguousarray(x)
    cdef const double[:, ::1] a = xarr.view(np.float64)
    cdef Py_ssize_t m = xarr.shape[0], n = xarr.shape[1], i, j, l
    garr = np.empty((n, n), dtype=np.complex128)
    cdef double[:, ::1] g = garr.view(np.float64)
    varr = np.eye(n, dtype=np.complex128)
    cdef double[:, ::1] v = varr.view(np.float64)
    sarr = np.empty(n, dtype=np.float64)
    cdef double[::1] s = sarr
    cdef double gr, gi, ar, ai, br, bi, sr, si, acc
    cdef int sweeps
    with nogil:
        # g = x* x, Hermitian by construction
        for i in range(n):
            for j in range(i, n):
                gr = 0.0
                gi = 0.0
                for l in range(m):
                    ar = a[l, 2 * i]
                    ai = -a[l, 2 * i + 1]
                    br = a[l, 2 * j]
                    bi = a[l, 2 * j + 1]
                    gr += ar * br - ai * bi
                    gi += ar * bi + ai * br
                if i == j:
                    gi = 0.0
                g[i, 2 * j] = gr
                g[i, 2 * j + 1] = gi
                g[j, 2 * i] = gr
                g[j, 2 * i + 1] = -gi
        sweeps = _jacobi_core(g, v, n, tol, max_sweeps, True)
        for j in range(n):
            acc = 0.0
            for l in range(m):
                sr = 0.0
                si = 0.0
                for i in range(n):
                    ar = a[l, 2 * i]
                    ai = a[l, 2 * i + 1]
                    br = v[i, 2 * j]
                    bi = v[i, 2 * j + 1]
                    sr += ar * br - ai * bi
                    si += ar * bi + ai * br
                acc += sr * sr + si * si
            s[j] = sqrt(acc)
    sarr[::-1].sort()
    return sarr, sweeps
