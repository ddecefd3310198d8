"""The generalized commutator ``ABC - CBA`` and its matrix representation.

With ``A, C`` of shape m x n and ``B`` of shape n x m, the map
``B -> ABC - CBA`` is linear; through column-major vectorization it is the
mn x mn matrix ``K = C^T (x) A - A^T (x) C``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .linalg import ShapeError

GRAM_RTOL = 1e-10
EIG_FLOOR_RTOL = 1e-10
LAMBDA2_RTOL = 1e-8
# K*K eigenvalues below this fraction of ||A||^2 ||C||^2 are rounding noise
K_ZERO_RTOL = 1e-20


@dataclass(frozen=True, eq=False)
class TripleInstance:
    """Operands ``a`` (m x n), ``b`` (n x m), ``c`` (m x n) plus a provenance tag.

    Norms needed by the bound catalog are computed lazily and cached.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    provenance: str = "user"

    def __post_init__(self):
        for name in ("a", "b", "c"):
            x = np.asarray(getattr(self, name), dtype=np.complex128)
            if x.ndim != 2:
                raise ShapeError(f"{name} must be 2-D, got shape {x.shape}")
            if not np.isfinite(x).all():
                raise ValueError(f"{name} has non-finite entries")
            x.setflags(write=False)
            object.__setattr__(self, name, x)
        m, n = self.a.shape
        if self.c.shape != (m, n) or self.b.shape != (n, m):
            raise ShapeError(
                f"need A, C of shape m x n and B of shape n x m; got "
                f"A{self.a.shape}, B{self.b.shape}, C{self.c.shape}"
            )

    @property
    def shape(self):
        return self.a.shape

    def scaled(self, alpha=1.0, beta=1.0, gamma=1.0):
        return TripleInstance(alpha * self.a, beta * self.b, gamma * self.c, self.provenance)

    def replace(self, **mats):
        args = {"a": self.a, "b": self.b, "c": self.c, "provenance": self.provenance}
        args.update(mats)
        return TripleInstance(**args)

    @cached_property
    def commutator(self):
        return gen_commutator(self)

    @cached_property
    def lhs(self):
        return la.frob_norm_sq(self.commutator)

    @cached_property
    def sv_a(self):
        return la.singular_values(self.a)

    @cached_property
    def sv_b(self):
        return la.singular_values(self.b)

    @cached_property
    def sv_c(self):
        return la.singular_values(self.c)

    @cached_property
    def kron_diff_sq(self):
        return kron_diff_sq(self.a, self.c)


def gen_commutator(t):
    """Return ``ABC - CBA`` for a :class:`TripleInstance`."""
    if t.shape == (1, 1):
        # scalars commute; float products would leave ~1e-17 of rounding
        return np.zeros((1, 1), dtype=np.complex128)
    return t.a @ t.b @ t.c - t.c @ t.b @ t.a


def _same_shape(a, c):
    a = np.asarray(a, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    if a.shape != c.shape:
        raise ShapeError(f"A and C must have the same shape, got {a.shape} and {c.shape}")
    return a, c


def build_K(a, c):
    """``C^T (x) A - A^T (x) C``, so that ``K @ vec(B) == vec(ABC - CBA)``."""
    a, c = _same_shape(a, c)
    if a.shape == (1, 1):
        # scalars commute, so K vanishes; c*a - a*c can round to ~1e-17
        return np.zeros((1, 1), dtype=np.complex128)
    return la.kronecker(c.T, a) - la.kronecker(a.T, c)


def paired_eigvec(a, c, y):
    """Partner vector ``-K* vec(Y*)`` where ``Y = unvec(y, n, m)``.

    It is orthogonal to ``y``, and when ``y`` is an eigenvector of ``K* K``
    for a positive eigenvalue it is a second eigenvector for the same value.
    """
    a, c = _same_shape(a, c)
    m, n = a.shape
    y = np.asarray(y, dtype=np.complex128)
    if y.size != m * n:
        raise ShapeError(f"y must have length {m * n}, got {y.size}")
    y_mat = la.unvec(y.reshape(-1, 1), n, m)
    k = build_K(a, c)
    return -(k.conj().T @ la.vec(y_mat.conj().T))


def kron_sum(a, c):
    """``conj(C) C^T (x) A* A + conj(A) A^T (x) C* C``."""
    a, c = _same_shape(a, c)
    return la.kronecker(c.conj() @ c.T, a.conj().T @ a) + la.kronecker(a.conj() @ a.T, c.conj().T @ c)


@dataclass(frozen=True)
class PsdCertificate:
    """Witness that ``2 * kron_sum(A, C) - K* K`` is positive semidefinite.

    ``m_matrix`` is that difference, ``s_matrix = C^T (x) A + A^T (x) C`` its
    Gram factor.  ``lambda1_kk`` and ``lambda2_sum`` feed the chain
    ``lambda_1(K*K) <= 2 lambda_2(kron_sum) <= 2 s1(C)^2 (s1(A)^2 + s2(A)^2)``.
    """

    m_matrix: np.ndarray = field(repr=False)
    s_matrix: np.ndarray = field(repr=False)
    min_eig: float
    max_eig: float
    gram_residual: float
    lambda1_kk: float
    lambda2_sum: float
    lambda2_bound: float
    lambda2_checked: bool

    @property
    def gram_ok(self):
        return self.gram_residual <= GRAM_RTOL * (1.0 + la.frob_norm(self.m_matrix))

    @property
    def floor_ok(self):
        return self.min_eig >= -EIG_FLOOR_RTOL * max(1.0, self.max_eig)

    @property
    def chain_ok(self):
        return self.lambda1_kk <= 2.0 * self.lambda2_sum * (1.0 + LAMBDA2_RTOL) + 1e-12

    @property
    def lambda2_ok(self):
        if not self.lambda2_checked:
            return True
        return self.lambda2_sum <= self.lambda2_bound * (1.0 + LAMBDA2_RTOL) + 1e-12

    @property
    def ok(self):
        return self.gram_ok and self.floor_ok and self.chain_ok and self.lambda2_ok


def psd_certificate(a, c):
    a, c = _same_shape(a, c)
    m, n = a.shape
    k = build_K(a, c)
    kk = k.conj().T @ k
    ksum = kron_sum(a, c)
    m_matrix = 2.0 * ksum - kk
    s_matrix = la.kronecker(c.T, a) + la.kronecker(a.T, c)
    w_m = la.eigvalsh(m_matrix)
    w_sum = la.eigvalsh(ksum)
    sa = la.singular_values(a)
    sc = la.singular_values(c)
    sa2 = sa[1] if sa.size > 1 else 0.0
    return PsdCertificate(
        m_matrix=m_matrix,
        s_matrix=s_matrix,
        min_eig=float(w_m[-1]),
        max_eig=float(w_m[0]),
        gram_residual=la.frob_norm(m_matrix - s_matrix.conj().T @ s_matrix),
        lambda1_kk=float(la.eigvalsh(kk)[0]),
        lambda2_sum=float(w_sum[1]) if w_sum.size > 1 else 0.0,
        lambda2_bound=float(sc[0] ** 2 * (sa[0] ** 2 + sa2**2)),
        lambda2_checked=m >= 2 and n >= 2,
    )


def kron_diff_sq(a, c):
    """``||A (x) C - C (x) A||_F^2``, formed explicitly."""
    a, c = _same_shape(a, c)
    return la.frob_norm_sq(la.kronecker(a, c) - la.kronecker(c, a))


def kron_diff_sq_closed(a, c):
    """Closed form ``2 (||A||^2 ||C||^2 - |(A, C)|^2)`` of :func:`kron_diff_sq`."""
    a, c = _same_shape(a, c)
    return 2.0 * (la.frob_norm_sq(a) * la.frob_norm_sq(c) - abs(la.frob_inner(a, c)) ** 2)


@dataclass(frozen=True)
class PairingReport:
    eigenvalues: np.ndarray
    clusters: list
    threshold: float
    vacuous: bool  # K is zero up to rounding, e.g. A == C
    ok: bool


def pairing_check(a, c, rtol=la.CLUSTER_RTOL):
    """Check that every eigenvalue cluster of ``K* K`` above
    ``rtol * lambda_1`` has at least two members.

    When ``lambda_1`` is at rounding level relative to ``||A||^2 ||C||^2``
    the check is vacuous and reports no clusters.
    """
    a, c = _same_shape(a, c)
    k = build_K(a, c)
    w = la.eigvalsh(k.conj().T @ k)
    lam1 = float(w[0])
    vacuous = lam1 <= K_ZERO_RTOL * la.frob_norm_sq(a) * la.frob_norm_sq(c)
    threshold = rtol * lam1
    clusters = [] if vacuous else [cl for cl in la.eigen_clusters(w, rtol) if cl[0] > threshold]
    ok = all(len(cl) >= 2 for cl in clusters)
    return PairingReport(eigenvalues=w, clusters=clusters, threshold=threshold, vacuous=vacuous, ok=ok)


def shift_c(a, c):
    """``C' = C - conj((A, C)) / ||A||_F^2 * A``; leaves ``ABC - CBA`` unchanged."""
    a, c = _same_shape(a, c)
    na = la.frob_norm_sq(a)
    if na == 0.0:
        return c.copy()
    return c - (la.frob_inner(a, c).conjugate() / na) * a
