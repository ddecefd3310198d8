"""Catalog of commutator norm bounds with uniform evaluation.

Every entry compares ``||ABC - CBA||_F^2`` (or ``||AB - BA||_F^2`` for the
square BW family, encoded as triples with ``C = I``) against a closed-form
right-hand side.  The catalog is fixed at import time.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import linalg as la
from .commutator import TripleInstance, kron_diff_sq, kron_diff_sq_closed, shift_c

RANK_RTOL = 1e-10


class Status(str, Enum):
    PROVED = "proved"
    CONJECTURED = "conjectured"
    KNOWN_FALSE = "known_false"


class NotApplicableError(ValueError):
    """The bound does not apply to the instance's shape or structure."""


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class BoundSpec:
    id: str
    status: Status
    lhs_formula: str
    rhs_formula: str
    rhs: Callable[[TripleInstance], float]
    applicability: Callable[[TripleInstance], Optional[str]]  # reason if not applicable
    bw_family: bool = False


@dataclass(frozen=True)
class InequalityReport:
    bound_id: str
    status: Status
    lhs: float
    rhs: float
    slack: float
    ratio: Optional[float]  # None when rhs == 0
    holds: bool
    rank_b: Optional[int] = None

    def as_dict(self):
        return {
            "bound_id": self.bound_id,
            "status": self.status.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "ratio": self.ratio,
            "holds": self.holds,
            "rank_b": self.rank_b,
        }


# -- applicability predicates -------------------------------------------------

def _any_shape(t):
    return None


def _vector_shape(t):
    m, n = t.shape
    return None if m == 1 or n == 1 else f"needs m == 1 or n == 1, got {m}x{n}"


def _square_identity_c(t):
    m, n = t.shape
    if m != n:
        return f"needs a square shape, got {m}x{n}"
    if not np.array_equal(t.c, np.eye(n)):
        return "needs C = I_n"
    return None


def _nonzero_b(t):
    return None if t.sv_b[0] > 0.0 else "B = 0 has rank 0"


# -- norms ----------------------------------------------------------------------

def _fro2(x):
    return la.frob_norm_sq(x)


def _spec2(sv):
    return float(sv[0]) ** 2


def _kyfan2(sv):
    return float(sv[0]) ** 2 + (float(sv[1]) ** 2 if sv.size > 1 else 0.0)


def numerical_rank(sv, rtol=RANK_RTOL):
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rtol * sv[0]))


def _rank_k_rhs(t):
    return _fro2(t.b) / numerical_rank(t.sv_b) * t.kron_diff_sq


def _kron_ab_sq(t):
    return la.frob_norm_sq(la.kronecker(t.a, t.b) - la.kronecker(t.b, t.a))


_ENTRIES = [
    BoundSpec(
        "BW", Status.PROVED,
        "||AB - BA||_F^2", "2 ||A||_F^2 ||B||_F^2",
        lambda t: 2.0 * _fro2(t.a) * _fro2(t.b),
        _square_identity_c, bw_family=True,
    ),
    BoundSpec(
        "BW_KYFAN", Status.PROVED,
        "||AB - BA||_F^2", "2 ||A||_(2),2^2 ||B||_F^2",
        lambda t: 2.0 * _kyfan2(t.sv_a) * _fro2(t.b),
        _square_identity_c, bw_family=True,
    ),
    BoundSpec(
        "BW_KRON", Status.PROVED,
        "||AB - BA||_F^2", "||A (x) B - B (x) A||_F^2",
        _kron_ab_sq,
        _square_identity_c, bw_family=True,
    ),
    BoundSpec(
        "GBW", Status.PROVED,
        "||ABC - CBA||_F^2", "2 ||C||_2^2 ||A||_(2),2^2 ||B||_F^2",
        lambda t: 2.0 * _spec2(t.sv_c) * _kyfan2(t.sv_a) * _fro2(t.b),
        _any_shape,
    ),
    BoundSpec(
        "GBW_VEC", Status.PROVED,
        "||ABC - CBA||_F^2", "||C||_2^2 ||A||_(2),2^2 ||B||_F^2",
        lambda t: _spec2(t.sv_c) * _kyfan2(t.sv_a) * _fro2(t.b),
        _vector_shape,
    ),
    BoundSpec(
        "VEC_KRON", Status.PROVED,
        "||ABC - CBA||_F^2", "||B||_F^2 / 2 * ||A (x) C - C (x) A||_F^2",
        lambda t: 0.5 * _fro2(t.b) * t.kron_diff_sq,
        _vector_shape,
    ),
    BoundSpec(
        "FALSE_KRON_B", Status.KNOWN_FALSE,
        "||ABC - CBA||_F^2", "||C||_2^2 ||A (x) B - B (x) A||_F^2",
        lambda t: _spec2(t.sv_c) * _kron_ab_sq(t),
        _any_shape,
    ),
    BoundSpec(
        "CONJ", Status.CONJECTURED,
        "||ABC - CBA||_F^2", "2 ||B||_2^2 ||A||_(2),2^2 ||C||_F^2",
        lambda t: 2.0 * _spec2(t.sv_b) * _kyfan2(t.sv_a) * _fro2(t.c),
        _any_shape,
    ),
    BoundSpec(
        "CONJ_KRON", Status.CONJECTURED,
        "||ABC - CBA||_F^2", "||B||_2^2 ||A (x) C - C (x) A||_F^2",
        lambda t: _spec2(t.sv_b) * t.kron_diff_sq,
        _any_shape,
    ),
    BoundSpec(
        "GSTBW", Status.PROVED,
        "||ABC - CBA||_F^2", "||B||_F^2 / 2 * ||A (x) C - C (x) A||_F^2",
        lambda t: 0.5 * _fro2(t.b) * t.kron_diff_sq,
        _any_shape,
    ),
    BoundSpec(
        "RANK_K", Status.KNOWN_FALSE,
        "||ABC - CBA||_F^2", "||B||_F^2 / rank(B) * ||A (x) C - C (x) A||_F^2",
        _rank_k_rhs,
        _nonzero_b,
    ),
]

CATALOG = {spec.id: spec for spec in _ENTRIES}
BOUND_IDS = tuple(CATALOG)


def get_bound(bound_id):
    try:
        return CATALOG[bound_id]
    except KeyError:
        raise KeyError(f"unknown bound {bound_id!r}; expected one of {', '.join(BOUND_IDS)}") from None


def applicability(bound_id, t):
    """Return ``None`` when the bound applies to ``t``, else the reason."""
    return get_bound(bound_id).applicability(t)


def holds(lhs, rhs, tol=DEFAULT_TOL):
    return rhs - lhs >= -tol.abs_tol - tol.rel_tol * rhs


def eval_bound(bound_id, t, tol=DEFAULT_TOL):
    """Evaluate one catalog bound on a triple.

    Raises
    ------
    NotApplicableError
        If the bound's shape or structure predicate rejects ``t``.
    """
    spec = get_bound(bound_id)
    reason = spec.applicability(t)
    if reason is not None:
        raise NotApplicableError(f"{bound_id}: {reason}")
    if spec.bw_family:
        lhs = _fro2(t.a @ t.b - t.b @ t.a)
    else:
        lhs = t.lhs
    rhs = float(spec.rhs(t))
    return InequalityReport(
        bound_id=bound_id,
        status=spec.status,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        ratio=lhs / rhs if rhs > 0.0 else None,
        holds=holds(lhs, rhs, tol),
        rank_b=numerical_rank(t.sv_b) if bound_id == "RANK_K" else None,
    )


def eval_all(t, tol=DEFAULT_TOL):
    """Evaluate every applicable bound.

    Returns ``(reports, skipped)`` where ``skipped`` maps each inapplicable
    bound id to the reason.
    """
    reports, skipped = [], {}
    for bound_id, spec in CATALOG.items():
        reason = spec.applicability(t)
        if reason is None:
            reports.append(eval_bound(bound_id, t, tol))
        else:
            skipped[bound_id] = reason
    return reports, skipped


def implication_chain_check(t, atol=1e-10):
    """Check the pointwise orderings between right-hand sides.

    ``rhs(GBW_VEC) <= rhs(GBW)``; the CONJ_KRON right-hand side equals
    ``2 ||B||_2^2 (||A||_F^2 ||C||_F^2 - |(A, C)|^2)``; the GSTBW right-hand
    side equals ``||B||_F^2 / 2 * ||A (x) C - C (x) A||_F^2``.  Formulas are
    evaluated regardless of shape restrictions.
    """
    gbw = CATALOG["GBW"].rhs(t)
    gbw_vec = CATALOG["GBW_VEC"].rhs(t)
    b2 = _spec2(t.sv_b)
    closed = kron_diff_sq_closed(t.a, t.c)
    conj_kron = CATALOG["CONJ_KRON"].rhs(t)
    gstbw = CATALOG["GSTBW"].rhs(t)
    scale = 1.0 + gbw + b2 * closed + gstbw
    return (
        gbw_vec <= gbw + atol * scale
        and conj_kron <= b2 * closed + atol * scale
        and abs(gstbw - 0.5 * _fro2(t.b) * kron_diff_sq(t.a, t.c)) <= atol * scale
    )


def shifted_instance(t):
    """Same triple with ``C`` replaced by its component orthogonal to ``A``."""
    return t.replace(c=shift_c(t.a, t.c))
