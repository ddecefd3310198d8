"""Pure-Python fallback for the Jacobi kernel.

Same rotation sequence as the compiled core, with the row and column
updates done as numpy slice operations.
"""

import math

import numpy as np


def jacobi_eigh(h_in, tol=1e-14, max_sweeps=64, vectors=True):
    h = np.array(h_in, dtype=np.complex128, order="C", copy=True)
    k = h.shape[0]
    v = np.eye(k, dtype=np.complex128) if vectors else None
    thresh = tol * tol * float(np.vdot(h, h).real)
    # entries this small cannot keep the sweep from converging; leave them
    skip = thresh / (k * k)
    iu = np.triu_indices(k, 1)

    sweep = 0
    while True:
        if 2.0 * float(np.sum(np.abs(h[iu]) ** 2)) <= thresh:
            break
        if sweep >= max_sweeps:
            sweep = -1
            break
        sweep += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                hpq = complex(h[p, q])
                c_abs = abs(hpq)
                if c_abs * c_abs <= skip:
                    continue
                app = h[p, p].real
                aqq = h[q, q].real
                e = hpq.conjugate() / c_abs
                theta = (aqq - app) / (2.0 * c_abs)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                cs = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * cs
                f_qp = -sn * e
                f_qq = cs * e

                col_p = h[:, p].copy()
                col_q = h[:, q]
                h[:, p] = cs * col_p + f_qp * col_q
                h[:, q] = sn * col_p + f_qq * col_q
                row_p = h[p, :].copy()
                row_q = h[q, :]
                h[p, :] = cs * row_p + f_qp.conjugate() * row_q
                h[q, :] = sn * row_p + f_qq.conjugate() * row_q
                h[p, q] = h[q, p] = 0.0
                h[p, p] = app - t * c_abs
                h[q, q] = aqq + t * c_abs
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = cs * vp + f_qp * vq
                    v[:, q] = sn * vp + f_qq * vq

    return np.diag(h).real.copy(), v, sweep


def singular_values(x_in, tol=1e-14, max_sweeps=64):
    x = np.asarray(x_in, dtype=np.complex128)
    if x.shape[0] < x.shape[1]:
        x = x.conj().T
    g = x.conj().T @ x
    _, v, sweeps = jacobi_eigh(0.5 * (g + g.conj().T), tol, max_sweeps, True)
    s = np.linalg.norm(x @ v, axis=0)
    s[::-1].sort()
    return s, sweeps
