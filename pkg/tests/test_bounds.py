import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gencomm import linalg as la
from gencomm.bounds import (
    BOUND_IDS,
    CATALOG,
    DEFAULT_TOL,
    NotApplicableError,
    Status,
    Tolerance,
    applicability,
    eval_all,
    eval_bound,
    holds,
    implication_chain_check,
    numerical_rank,
    shifted_instance,
)
from gencomm.commutator import TripleInstance, gen_commutator, kron_diff_sq
from gencomm.search import sample_draw

from conftest import crandn, random_triple

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 4)
PROVED = [b for b in BOUND_IDS if CATALOG[b].status is Status.PROVED]


def seeded(seed):
    return np.random.default_rng(seed)


def bw_triple(rng, n):
    return TripleInstance(crandn(rng, n, n), crandn(rng, n, n), np.eye(n))


def test_catalog_is_closed():
    assert BOUND_IDS == (
        "BW", "BW_KYFAN", "BW_KRON", "GBW", "GBW_VEC", "VEC_KRON",
        "FALSE_KRON_B", "CONJ", "CONJ_KRON", "GSTBW", "RANK_K",
    )
    statuses = {b: CATALOG[b].status.value for b in BOUND_IDS}
    assert statuses["CONJ"] == statuses["CONJ_KRON"] == "conjectured"
    assert statuses["FALSE_KRON_B"] == statuses["RANK_K"] == "known_false"
    assert sum(v == "proved" for v in statuses.values()) == 7
    with pytest.raises(KeyError):
        eval_bound("NOPE", None)


def test_holds_tolerance():
    assert holds(1.0, 1.0)
    assert holds(1.0 + 1e-11, 1.0)
    assert not holds(1.0 + 1e-9, 1.0)
    assert holds(5e-11, 0.0)
    assert not holds(1.0, 0.0)
    assert holds(2.0, 1.0, Tolerance(abs_tol=1.0, rel_tol=0.0))


# -- worked examples ------------------------------------------------------------------

def test_rank_example(rank_triple):
    reps, skipped = eval_all(rank_triple)
    by_id = {r.bound_id: r for r in reps}
    assert set(skipped) == {"BW", "BW_KYFAN", "BW_KRON", "GBW_VEC", "VEC_KRON"}
    r = by_id["RANK_K"]
    assert r.rank_b == 3
    assert abs(r.lhs - 4.5) <= 1e-12 and abs(r.rhs - 4.0) <= 1e-12
    assert not r.holds and r.slack == pytest.approx(-0.5, abs=1e-12)
    assert by_id["GBW"].rhs == pytest.approx(9.0, abs=1e-12) and by_id["GBW"].holds
    assert by_id["CONJ"].rhs == pytest.approx(10.0, abs=1e-12) and by_id["CONJ"].holds
    assert by_id["GSTBW"].rhs == pytest.approx(6.0, abs=1e-12) and by_id["GSTBW"].holds
    assert by_id["CONJ_KRON"].rhs == pytest.approx(8.0, abs=1e-12) and by_id["CONJ_KRON"].holds
    for rep in reps:
        assert rep.lhs == 4.5
        assert rep.holds == (rep.bound_id not in ("RANK_K",))


def test_kron_b_counterexample(kron_b_triple):
    r = eval_bound("FALSE_KRON_B", kron_b_triple)
    assert abs(r.lhs - 1.0) <= 1e-12 and abs(r.rhs) <= 1e-12
    assert r.ratio is None and not r.holds


def test_gbw_equality_witness():
    e12 = np.array([[0.0, 1.0], [0.0, 0.0]])
    t = TripleInstance(e12, e12.T, np.eye(2))
    gbw = eval_bound("GBW", t)
    assert gbw.lhs == 2.0 and gbw.rhs == pytest.approx(2.0, abs=1e-14)
    assert gbw.ratio == pytest.approx(1.0, abs=1e-14) and gbw.holds
    bw = eval_bound("BW", t)
    assert (bw.lhs, bw.rhs) == (2.0, 2.0)


def test_gbw_vec_equality_family(rng):
    for _ in range(5):
        b = crandn(rng, 1, 2)
        t = TripleInstance([[1.0], [0.0]], b, [[0.0], [1.0]])
        r = eval_bound("GBW_VEC", t)
        assert r.lhs == pytest.approx(la.frob_norm_sq(b), rel=1e-14)
        assert r.rhs == pytest.approx(la.frob_norm_sq(b), rel=1e-14)
        assert r.ratio == pytest.approx(1.0, abs=1e-12)


def test_zero_triple():
    z = TripleInstance(la.zeros(2, 3), la.zeros(3, 2), la.zeros(2, 3))
    reps, skipped = eval_all(z)
    assert "RANK_K" in skipped
    assert reps and all(r.lhs == 0 and r.holds for r in reps)


@pytest.mark.parametrize("which", ["a", "b", "c"])
def test_one_zero_factor(rng, which):
    t = random_triple(rng, 3, 3).replace(**{which: la.zeros(3, 3)})
    reps, _ = eval_all(t)
    assert all(r.lhs == 0 and r.holds for r in reps)


def test_scalar_triple(rng):
    t = random_triple(rng, 1, 1)
    reps, _ = eval_all(t)
    assert all(r.lhs == 0 and r.holds for r in reps)


def test_equal_a_c_gives_zero_conj_kron(rng):
    a = crandn(rng, 2, 3)
    t = TripleInstance(a, crandn(rng, 3, 2), a)
    r = eval_bound("CONJ_KRON", t)
    assert r.lhs == 0 and r.rhs == 0 and r.ratio is None and r.holds


# -- applicability ------------------------------------------------------------------

def test_applicability(rng):
    sq = bw_triple(rng, 2)
    assert applicability("BW", sq) is None
    assert applicability("BW", sq.replace(c=2 * np.eye(2))) is not None
    wide = random_triple(rng, 2, 3)
    assert "square" in applicability("BW", wide)
    assert applicability("GBW_VEC", wide) is not None
    assert applicability("GBW_VEC", random_triple(rng, 1, 3)) is None
    assert applicability("GBW_VEC", random_triple(rng, 3, 1)) is None
    with pytest.raises(NotApplicableError):
        eval_bound("VEC_KRON", wide)
    assert applicability("RANK_K", wide.replace(b=la.zeros(3, 2))) is not None


def test_numerical_rank():
    assert numerical_rank(np.array([1.0, 0.5, 0.5])) == 3
    assert numerical_rank(np.array([1.0, 1e-11])) == 1
    assert numerical_rank(np.array([0.0, 0.0])) == 0


# -- invariants ------------------------------------------------------------------------

@settings(max_examples=60)
@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_reports_well_formed(seed, m, n):
    t = random_triple(seeded(seed), m, n)
    reps, skipped = eval_all(t)
    assert {r.bound_id for r in reps} | set(skipped) == set(BOUND_IDS)
    for r in reps:
        assert r.lhs >= 0 and r.rhs >= 0
        assert r.slack == r.rhs - r.lhs
        assert r.holds == holds(r.lhs, r.rhs, DEFAULT_TOL)
        if r.status is Status.PROVED:
            assert r.holds and r.slack >= -1e-10 * r.rhs - 1e-10


@settings(max_examples=60)
@given(seeds, st.integers(1, 5))
def test_bw_family_sound_and_sharpening(seed, n):
    t = bw_triple(seeded(seed), n)
    by_id = {r.bound_id: r for r in eval_all(t)[0]}
    for b in ("BW", "BW_KYFAN", "BW_KRON", "GBW", "GSTBW"):
        assert by_id[b].holds
    assert by_id["BW"].lhs == la.frob_norm_sq(t.a @ t.b - t.b @ t.a)
    assert by_id["BW_KRON"].rhs <= by_id["BW"].rhs + 1e-10 * by_id["BW"].rhs
    assert by_id["BW_KYFAN"].rhs <= by_id["BW"].rhs + 1e-10 * by_id["BW"].rhs


@pytest.mark.parametrize("alpha,beta,gamma", [(2, 1j, -0.5), (-0.5, 2, 1j), (1j, -0.5, 2)])
def test_scale_covariance(rng, rank_triple, alpha, beta, gamma):
    factor = abs(alpha) ** 2 * abs(beta) ** 2 * abs(gamma) ** 2
    for t in (random_triple(rng, 2, 3), random_triple(rng, 1, 4), rank_triple, bw_triple(rng, 3)):
        base, _ = eval_all(t)
        scaled, skipped = eval_all(t.scaled(alpha, beta, gamma))
        scaled = {r.bound_id: r for r in scaled}
        for r in base:
            if r.bound_id not in scaled:
                # scaling C = I moves the instance out of the BW family
                assert CATALOG[r.bound_id].bw_family and r.bound_id in skipped
                continue
            s = scaled[r.bound_id]
            assert s.lhs == pytest.approx(factor * r.lhs, rel=1e-12, abs=1e-12)
            assert s.rhs == pytest.approx(factor * r.rhs, rel=1e-12, abs=1e-12)
            assert s.holds == r.holds


@settings(max_examples=60)
@given(seeds, dims, dims)
def test_implication_chain(seed, m, n):
    assert implication_chain_check(random_triple(seeded(seed), m, n))


def test_vector_rhs_is_half_of_gbw(rng):
    for shape in [(1, 3), (4, 1), (1, 1)]:
        t = random_triple(rng, *shape)
        assert eval_bound("GBW_VEC", t).rhs == pytest.approx(eval_bound("GBW", t).rhs / 2, rel=1e-14)


def test_vec_kron_matches_gstbw_on_vectors(rng):
    t = random_triple(rng, 1, 4)
    assert eval_bound("VEC_KRON", t).rhs == eval_bound("GSTBW", t).rhs


def test_false_kron_rhs_vanishes_on_vectors(rng):
    # for vector shapes A (x) B = B (x) A up to the same reshaping, so the rhs is 0
    t = random_triple(rng, 3, 1)
    assert eval_bound("FALSE_KRON_B", t).rhs <= 1e-24
    assert not eval_bound("FALSE_KRON_B", t).holds


@given(seeds, dims, dims)
def test_shifted_instance_preserves_lhs(seed, m, n):
    t = random_triple(seeded(seed), m, n)
    s = shifted_instance(t)
    assert s.lhs == pytest.approx(t.lhs, rel=1e-10, abs=1e-12)
    assert kron_diff_sq(s.a, s.c) == pytest.approx(kron_diff_sq(t.a, t.c), rel=1e-10, abs=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 6) for n in range(1, 6)])
def test_proved_bounds_sound_on_random_draws(m, n):
    # reduced sweep; the full 10^4-per-shape run lives in the acceptance suite
    for i in range(200):
        t = sample_draw("complex_gaussian", m, n, 7, i)
        for rep in eval_all(t)[0]:
            if rep.status is Status.PROVED:
                assert rep.holds, (rep, t.provenance)
        if m == n:
            bw = t.replace(c=np.eye(n))
            for b in ("BW", "BW_KYFAN", "BW_KRON"):
                assert eval_bound(b, bw).holds
