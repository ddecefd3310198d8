"""Dense complex linear algebra used throughout the package.

Matrices are plain ``complex128`` numpy arrays of shape ``(rows, cols)``.
``vec`` is column-major, so ``vec``/``unvec`` are reshapes with
``order="F"``.  The only non-trivial algorithm here is the Hermitian
eigensolver (cyclic Jacobi, see :mod:`gencomm.kernels`); the SVD is derived
from it.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 64
CLUSTER_RTOL = 1e-8
DEFAULT_TOL = 1e-10


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class ConvergenceError(np.linalg.LinAlgError):
    """The Jacobi sweep budget was exhausted."""


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray  # descending
    vectors: np.ndarray  # column i pairs with values[i]


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    sigma: np.ndarray  # length min(m, n), descending
    v: np.ndarray


def cmat(data):
    """Build a validated complex matrix from nested sequences or an array.

    One-dimensional input becomes a column.  Non-finite entries are
    rejected.
    """
    x = np.array(data, dtype=np.complex128)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise ValueError("matrix entries must be finite")
    return x


def identity(n):
    return np.eye(n, dtype=np.complex128)


def zeros(m, n):
    return np.zeros((m, n), dtype=np.complex128)


def unit(m, n, i, j):
    """The m x n matrix unit with a single one at (i, j), zero-based."""
    e = zeros(m, n)
    e[i, j] = 1.0
    return e


def conj_transpose(x):
    return np.asarray(x).conj().T


def frob_inner(x, y):
    """Trace inner product ``Tr(X Y*)``, i.e. ``sum(x * conj(y))``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch {x.shape} vs {y.shape}")
    return complex(np.vdot(y, x))


def frob_norm_sq(x):
    x = np.asarray(x)
    return float(np.vdot(x, x).real)


def frob_norm(x):
    return float(np.sqrt(frob_norm_sq(x)))


def matmul(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[1] != y.shape[0]:
        raise ShapeError(f"cannot multiply {x.shape} by {y.shape}")
    return x @ y


def kronecker(x, y):
    """Block matrix ``[x_ij * y]``."""
    x = np.asarray(x)
    y = np.asarray(y)
    (p, q), (r, s) = x.shape, y.shape
    return (x[:, None, :, None] * y[None, :, None, :]).reshape(p * r, q * s)


def vec(x):
    """Stack the columns of ``x`` into an ``(rows*cols, 1)`` column."""
    x = np.asarray(x)
    return x.reshape(-1, 1, order="F")


def unvec(v, rows, cols):
    v = np.asarray(v)
    if v.size != rows * cols or (v.ndim == 2 and v.shape[1] != 1):
        raise ShapeError(f"cannot unvec length {v.size} into {rows}x{cols}")
    return v.reshape(rows, cols, order="F")


def _check_hermitian(h, tol):
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {h.shape}")
    scale = frob_norm(h)
    if frob_norm(h - h.conj().T) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return 0.5 * (h + h.conj().T)


def _jacobi(h, vectors):
    w, v, sweeps = kernels.jacobi_eigh(h, JACOBI_TOL, JACOBI_MAX_SWEEPS, vectors)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={h.shape[0]})"
        )
    return w, v


def hermitian_eigen(h, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized as ``(H + H*)/2`` after checking that it is
    Hermitian to within ``tol * ||H||_F``.  Ties keep the order produced by
    the solver.

    Raises
    ------
    ShapeError
        If ``h`` is not square.
    ConvergenceError
        If the sweep budget is exhausted.
    """
    h = _check_hermitian(h, tol)
    w, v = _jacobi(h, True)
    order = np.argsort(-w, kind="stable")
    return EigenResult(values=w[order], vectors=v[:, order])


def eigvalsh(h, tol=DEFAULT_TOL):
    """Eigenvalues only, descending."""
    h = _check_hermitian(h, tol)
    w, _ = _jacobi(h, False)
    return w[np.argsort(-w, kind="stable")]


def _complete_columns(u, m, cols):
    # Fill the columns in ``cols`` with unit vectors orthogonal to the rest.
    filled = [j for j in range(u.shape[1]) if j not in cols]
    basis = u[:, filled]
    for j in cols:
        best, best_norm = None, -1.0
        for e in identity(m).T:
            r = e - basis @ (basis.conj().T @ e)
            r = r - basis @ (basis.conj().T @ r)
            nr = np.linalg.norm(r)
            if nr > best_norm:
                best, best_norm = r, nr
            if nr > 0.5:
                break
        u[:, j] = best / best_norm
        basis = np.column_stack([basis, u[:, j]])
    return u


def svd(x, tol=DEFAULT_TOL):
    """Full singular value decomposition ``x = u @ diag(sigma) @ v*``.

    Singular values and right vectors come from :func:`hermitian_eigen`
    applied to ``x* x`` (on the smaller side; wide inputs are handled by
    transposing).  Left vectors are the normalized columns of ``x v``,
    re-orthogonalized, with null-space columns completed by Gram-Schmidt.
    """
    x = np.asarray(x, dtype=np.complex128)
    m, n = x.shape
    if m < n:
        r = svd(x.conj().T, tol)
        return SvdResult(u=r.v, sigma=r.sigma, v=r.u)

    v = hermitian_eigen(x.conj().T @ x, tol).vectors
    w = x @ v
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    v, w, sigma = v[:, order], w[:, order], sigma[order]

    u = np.zeros((m, m), dtype=np.complex128)
    cutoff = 1e-13 * sigma[0]
    null = []
    for i in range(n):
        if sigma[i] <= cutoff:
            null.append(i)
            continue
        col = w[:, i] / sigma[i]
        if i:
            prev = u[:, :i]
            for _ in range(2):
                col = col - prev @ (prev.conj().T @ col)
        nc = np.linalg.norm(col)
        if nc < 0.5:
            null.append(i)
            continue
        u[:, i] = col / nc
    u = _complete_columns(u, m, null + list(range(n, m)))
    return SvdResult(u=u, sigma=sigma, v=v)


def singular_values(x):
    """Singular values, descending, length ``min(rows, cols)``.

    Computed as ``||x v_i||`` over the eigenvectors of the smaller Gram
    matrix rather than ``sqrt(lambda_i)``: null directions then come out at
    ``eps * sigma_1`` instead of ``sqrt(eps) * sigma_1``, which numerical rank
    needs.
    """
    s, sweeps = kernels.singular_values(x, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return s


def spectral_norm(x):
    return float(singular_values(x)[0])


def ky_fan_22(x):
    """Ky Fan (2,2)-norm ``sqrt(sigma_1^2 + sigma_2^2)``.

    For vector-shaped input ``sigma_2`` is taken as 0.
    """
    s = singular_values(x)
    if s.size == 1:
        return float(s[0])
    return float(np.hypot(s[0], s[1]))


def is_psd(h, tol=DEFAULT_TOL):
    """True iff ``lambda_min(h) >= -tol * max(1, lambda_1(h))``."""
    w = eigvalsh(h)
    return bool(w[-1] >= -tol * max(1.0, w[0]))


def eigen_clusters(values, rtol=CLUSTER_RTOL):
    """Group descending eigenvalues into clusters of near-equal values.

    Consecutive values closer than ``rtol * max(1, values[0])`` share a
    cluster.  Returns a list of lists of values.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    radius = rtol * max(1.0, float(values[0]))
    clusters = [[float(values[0])]]
    for a, b in zip(values[:-1], values[1:]):
        if abs(a - b) <= radius:
            clusters[-1].append(float(b))
        else:
            clusters.append([float(b)])
    return clusters
