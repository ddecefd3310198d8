"""Random sampling and hill-climbing search for extremal bound ratios.

All catalog bounds are homogeneous of degree (2, 2, 2) in (A, B, C), so the
ratio ``lhs / rhs`` only depends on the directions of the three matrices and
the search can keep each of them on the unit Frobenius sphere.
"""

import math
import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bounds import NotApplicableError, eval_bound, get_bound
from .commutator import TripleInstance

VIOLATION_MARGIN = 1e-8
PLATEAU_STEP = 1e-8
REJECTS_BEFORE_HALVING = 20
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_ASCENT_STREAM = 0x5EA7C4  # spawn key separating ascent draws from sampling draws


class Termination(str, Enum):
    BUDGET_EXHAUSTED = "budget_exhausted"
    PLATEAU = "plateau"
    VIOLATION_FOUND = "violation_found"


@dataclass(frozen=True)
class Distribution:
    """Entry distribution: ``complex_gaussian``, ``real_gaussian``,
    ``low_rank`` (with ``rank``) or ``unit_sphere``."""

    name: str = "complex_gaussian"
    rank: int = 0

    def __str__(self):
        return f"low_rank({self.rank})" if self.name == "low_rank" else self.name

    @property
    def is_real(self):
        return self.name == "real_gaussian"


_DIST_NAMES = ("complex_gaussian", "real_gaussian", "low_rank", "unit_sphere")


def parse_distribution(text):
    """Parse ``complex_gaussian``, ``real_gaussian``, ``unit_sphere`` or
    ``low_rank(r)`` (also ``low_rank:r``)."""
    if isinstance(text, Distribution):
        return text
    text = text.strip()
    mt = re.fullmatch(r"low_rank[(:](\d+)\)?", text)
    if mt:
        rank = int(mt.group(1))
        if rank < 1:
            raise ValueError("low_rank needs r >= 1")
        return Distribution("low_rank", rank)
    if text in _DIST_NAMES and text != "low_rank":
        return Distribution(text)
    raise ValueError(f"unknown distribution {text!r}")


def draw_rng(seed, m, n, index):
    """Independent generator for draw ``index`` of shape ``m x n`` under ``seed``."""
    return np.random.default_rng([seed, m, n, index])


def _gaussian(rng, shape, real):
    if real:
        return rng.standard_normal(shape).astype(np.complex128)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _draw_matrix(dist, rng, rows, cols):
    if dist.name == "low_rank":
        left = _gaussian(rng, (rows, dist.rank), False)
        right = _gaussian(rng, (dist.rank, cols), False)
        return left @ right
    x = _gaussian(rng, (rows, cols), dist.is_real)
    if dist.name == "unit_sphere":
        x /= np.linalg.norm(x)
    return x


def sample_instance(dist, m, n, rng, provenance="sampled"):
    """Draw ``A, C`` (m x n) and ``B`` (n x m) from ``dist`` using ``rng``."""
    if m < 1 or n < 1:
        raise ValueError(f"invalid shape {m}x{n}")
    dist = parse_distribution(dist)
    if dist.name == "complex_gaussian":
        # one draw for all three matrices; same law as _draw_matrix
        z = rng.standard_normal((2, 3, m * n)) * _INV_SQRT2
        z = z[0] + 1j * z[1]
        a = z[0].reshape(m, n)
        b = z[1].reshape(n, m)
        c = z[2].reshape(m, n)
    else:
        a = _draw_matrix(dist, rng, m, n)
        b = _draw_matrix(dist, rng, n, m)
        c = _draw_matrix(dist, rng, m, n)
    return TripleInstance(a, b, c, provenance)


def sample_draw(dist, m, n, seed, index):
    """Deterministic draw identified by ``(seed, m, n, index)``."""
    return sample_instance(
        dist, m, n, draw_rng(seed, m, n, index), provenance=f"seed={seed};shape={m}x{n};draw={index}"
    )


def ratio_objective(bound_id, t):
    """``lhs / rhs`` of a catalog bound, or ``None`` when ``rhs == 0``."""
    return eval_bound(bound_id, t).ratio


@dataclass(frozen=True)
class SearchConfig:
    bound_id: str
    shape: tuple
    trials: int = 1000
    ascent_steps: int = 1000
    step_size: float = 0.5
    rng_seed: int = 0
    distribution: Distribution = field(default_factory=Distribution)

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        object.__setattr__(self, "distribution", parse_distribution(self.distribution))
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.ascent_steps < 0 or self.step_size <= 0:
            raise ValueError("ascent_steps must be >= 0 and step_size > 0")
        m, n = self.shape
        probe = TripleInstance(np.ones((m, n)), np.ones((n, m)), np.ones((m, n)))
        reason = get_bound(self.bound_id).applicability(probe)
        if reason is not None:
            raise NotApplicableError(f"{self.bound_id} on {m}x{n}: {reason}")


@dataclass
class SearchRecord:
    bound_id: str
    best_instance: TripleInstance
    best_ratio: float
    trace: list  # (iteration, ratio) for every accepted point
    terminated: Termination
    iterations: int
    rng_seed: int

    @property
    def violation(self):
        return self.terminated is Termination.VIOLATION_FOUND


def _objective(bound_id, t):
    try:
        r = eval_bound(bound_id, t).ratio
    except (FloatingPointError, ArithmeticError, np.linalg.LinAlgError):
        return -math.inf
    return -math.inf if r is None or not math.isfinite(r) else r


def _normalized(x):
    nx = np.linalg.norm(x)
    return x / nx if nx > 0 else x


def hill_climb(config):
    """Best-of-``trials`` random start followed by single-matrix perturbation ascent.

    Each step perturbs one of A, B, C by ``step_size`` times a fresh Gaussian
    matrix, rescales it to unit Frobenius norm and keeps the move only if the
    ratio strictly increases.  The step halves after 20 consecutive
    rejections.  The run stops when the step budget is spent, the step drops
    below 1e-8, or the ratio exceeds ``1 + 1e-8``.
    """
    bound_id = config.bound_id
    m, n = config.shape
    threshold = 1.0 + VIOLATION_MARGIN
    spec = get_bound(bound_id)

    best, best_ratio = None, -math.inf
    for i in range(config.trials):
        t = sample_draw(config.distribution, m, n, config.rng_seed, i)
        r = _objective(bound_id, t)
        if best is None or r > best_ratio:
            best, best_ratio = t, r
        if best_ratio > threshold:
            break

    if best_ratio > threshold:
        return _record(config, spec, best, [(0, best_ratio)], Termination.VIOLATION_FOUND, 0)

    rng = np.random.default_rng([config.rng_seed, m, n, _ASCENT_STREAM])
    current, trace, terminated, iterations = ascend(
        bound_id, best, config.ascent_steps, config.step_size, rng, config.distribution.is_real
    )
    return _record(config, spec, current, trace, terminated, iterations)


def ascend(bound_id, start, steps, step_size, rng, real=False):
    """Perturbation ascent from ``start`` after scaling A, B, C to unit norm.

    Returns ``(instance, trace, termination, iterations)``.
    """
    threshold = 1.0 + VIOLATION_MARGIN
    mats = [_normalized(start.a), _normalized(start.b), _normalized(start.c)]
    current = start.replace(a=mats[0], b=mats[1], c=mats[2], provenance=start.provenance + ";ascent")
    current_ratio = _objective(bound_id, current)
    trace = [(0, current_ratio)]

    iteration = 0
    step = step_size
    rejects = 0
    terminated = Termination.BUDGET_EXHAUSTED
    while iteration < steps:
        if step < PLATEAU_STEP:
            terminated = Termination.PLATEAU
            break
        iteration += 1
        which = int(rng.integers(3))
        mats = [current.a, current.b, current.c]
        mats[which] = _normalized(mats[which] + step * _gaussian(rng, mats[which].shape, real))
        cand = current.replace(a=mats[0], b=mats[1], c=mats[2])
        r = _objective(bound_id, cand)
        if r > current_ratio:
            current, current_ratio = cand, r
            trace.append((iteration, r))
            rejects = 0
            if r > threshold:
                terminated = Termination.VIOLATION_FOUND
                break
        else:
            rejects += 1
            if rejects >= REJECTS_BEFORE_HALVING:
                step *= 0.5
                rejects = 0
    return current, trace, terminated, iteration


def _record(config, spec, instance, trace, terminated, iterations):
    ratio = trace[-1][1]
    return SearchRecord(
        bound_id=spec.id,
        best_instance=instance,
        best_ratio=ratio,
        trace=trace,
        terminated=terminated,
        iterations=iterations,
        rng_seed=config.rng_seed,
    )


# -- exact counterexamples ------------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    name: str
    bound_id: str
    instance: TripleInstance
    expected_lhs: float
    expected_rhs: float


def known_counterexamples():
    """The two exact counterexamples, to the C-weighted Kronecker bound and to
    the rank-k bound."""
    ab = np.array([[-1.0, -1.0], [0.0, 0.0]])
    remark = TripleInstance(ab, ab.copy(), np.diag([2.0, 1.0]), provenance="registry:CE_REMARK")
    rank = TripleInstance(
        np.array([[0.0, -1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        np.diag([1.0, 0.5, 0.5]),
        np.array([[-1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 0.0, 0.0]]),
        provenance="registry:CE_RANK",
    )
    return [
        Counterexample("CE_REMARK", "FALSE_KRON_B", remark, 1.0, 0.0),
        Counterexample("CE_RANK", "RANK_K", rank, 4.5, 4.0),
    ]


def equality_witnesses():
    """Instances attaining GBW and GBW_VEC with zero slack."""
    e12 = np.zeros((2, 2))
    e12[0, 1] = 1.0
    gbw = TripleInstance(e12, e12.T.copy(), np.eye(2), provenance="witness:GBW")
    vec = TripleInstance(
        np.array([[1.0], [0.0]]), np.array([[0.6, 0.8]]), np.array([[0.0], [1.0]]),
        provenance="witness:GBW_VEC",
    )
    return {"GBW": gbw, "GBW_VEC": vec}
