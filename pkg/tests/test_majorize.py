"""Majorization order, the two-majorant construction, family sampling, Hardy."""

import random
from fractions import Fraction as F

import pytest

from rearrcalc import (
    INF,
    EmptyFamilyError,
    HypothesisError,
    PreconditionError,
    box,
    canonicalize,
    constant,
    family_contains,
    hardy_check,
    hlp_compare,
    integrate,
    is_decreasing_rearrangement,
    level_integral,
    majorant_pair,
    maximal_eval,
    rearrangement,
    sample_family_member,
)
from rearrcalc.gen import majorized_pair, rand_step, run_hlp_suite


def test_hlp_compare_examples():
    assert hlp_compare(box(F(1, 3), 3), box(1, 1)).holds
    v = hlp_compare(box(2, 1), box(1, 1))
    assert not v.holds
    assert v.witness == 1
    # reflexive, and downward along scaling
    x = canonicalize([1, 3], [2, 1], 0, INF)
    assert hlp_compare(x, x).holds
    assert hlp_compare(x * F(1, 2), x).holds
    assert not hlp_compare(x, x * F(1, 2)).holds


def test_hlp_witness_is_exact():
    rng = random.Random(77)
    checked = 0
    for _ in range(200):
        alpha = INF if rng.random() < 0.6 else F(1)
        y = rand_step(rng, alpha, max_pieces=5, nonzero_tail=True)
        x = rand_step(rng, alpha, max_pieces=5, nonzero_tail=True)
        v = hlp_compare(y, x)
        if not v.holds:
            t = v.witness
            assert 0 < t < alpha
            assert level_integral(y).value_at(t) > level_integral(x).value_at(t)
            checked += 1
    assert checked > 50


def test_hlp_tail_direction_on_halfline():
    # equal on any bounded window, ordered only by tail slope
    y = constant(1, INF)
    x = constant(2, INF)
    assert hlp_compare(y, x).holds
    v = hlp_compare(x, y)
    assert not v.holds
    assert level_integral(x).value_at(v.witness) > level_integral(y).value_at(v.witness)


def test_hlp_dense_grid_agreement():
    result = run_hlp_suite(300, 123)
    assert result.ok, result.failures


def test_is_decreasing_rearrangement():
    assert is_decreasing_rearrangement(box(1, 1))
    assert is_decreasing_rearrangement(canonicalize([1, 3], [2, 1], 0, INF))
    assert not is_decreasing_rearrangement(canonicalize([1, 2], [1, 2], 0, INF))
    assert not is_decreasing_rearrangement(box(-1, 1))


def test_family_contains_examples():
    x = box(1, 1)
    assert family_contains(box(F(1, 2), 1), x, 1, F(1, 2))
    assert not family_contains(box(F(1, 2), 3), x, 1, F(1, 4))
    # not nonincreasing -> not a member, regardless of integrals
    assert not family_contains(canonicalize([1, 2], [0, 1], 0, INF), x, 1, F(1, 8))
    # boundary eps = Phi_x(tau): only the zero function qualifies
    assert family_contains(constant(0, INF), x, F(1, 2), F(1, 2))
    assert not family_contains(box(F(1, 100), 1), x, F(1, 2), F(1, 2))
    with pytest.raises(PreconditionError):
        family_contains(box(1, 1), canonicalize([1, 2], [1, 2], 0, INF), 1, F(1, 4))


# Frozen construction geometry, derived by hand from the chord formulas.

def test_majorant_pair_single_box():
    x = box(1, 1)
    tr = majorant_pair(x, F(1, 2), F(1, 4))
    assert tr.case_tag == "affine_gap"
    assert tr.gamma == F(1, 4)
    assert tr.beta == F(2)
    assert tr.xi == F(3, 7)
    assert tr.z == canonicalize([F(1, 4), 2], [1, F(3, 7)], 0, INF)
    assert tr.w == tr.z
    assert tr.gamma0 is None and tr.gamma1 is None and tr.beta1 is None
    assert tr.tau1 == F(1, 8)
    assert tr.eps1 == F(1, 14)
    # the flattened majorant keeps a head gap of exactly 1/7 at tau
    assert family_contains(tr.z, x, F(1, 2), F(1, 7))
    assert not family_contains(tr.z, x, F(1, 2), F(1, 4))
    _assert_trace_invariants(x, F(1, 2), F(1, 4), tr)


def test_majorant_pair_two_level_plateau():
    x = canonicalize([1, 4], [2, 1], 0, INF)
    tr = majorant_pair(x, 2, F(1, 5))
    assert tr.case_tag == "affine_chord"
    assert tr.gamma == F(9, 5)
    assert tr.beta == F(5, 2)
    assert tr.xi == 1
    assert tr.gamma0 == 1
    assert tr.gamma1 == F(4, 5)
    assert tr.beta1 == F(21, 5)
    assert tr.z == canonicalize([F(4, 5), 2, 4], [2, F(7, 6), 1], 0, INF)
    assert tr.w == canonicalize([1, F(9, 5), F(21, 5)], [2, 1, F(11, 12)], 0, INF)
    assert tr.tau1 == F(3, 5)
    assert tr.eps1 == F(1, 15)
    _assert_trace_invariants(x, F(2), F(1, 5), tr)


def _assert_trace_invariants(x, tau, eps, tr):
    assert 0 < tr.gamma < tau < tr.beta
    assert 0 < tr.tau1 < tau and tr.eps1 > 0
    for g in (tr.z, tr.w):
        assert is_decreasing_rearrangement(g)
        assert hlp_compare(g, x).holds
        assert g != rearrangement(x).star
    assert family_contains(tr.z, x, tau - tr.tau1, tr.eps1)
    assert family_contains(tr.w, x, tau + tr.tau1, tr.eps1)


def test_family_nesting_in_eps():
    # membership is monotone downward in the gap parameter
    rng = random.Random(3)
    for _ in range(100):
        x = rearrangement(rand_step(rng, INF, max_pieces=5)).star
        if x.support_bound == 0:
            continue
        tau = x.support_bound * F(rng.randint(1, 8), 8)
        head = level_integral(x).value_at(tau)
        if head == 0:
            continue
        eps = head * F(rng.randint(1, 8), 9)
        y = rearrangement(rand_step(rng, INF, max_pieces=5)).star
        if family_contains(y, x, tau, eps):
            for k in (F(1, 2), F(1, 7), F(1, 100)):
                assert family_contains(y, x, tau, eps * k)


def test_majorant_pair_tau_beyond_support():
    # tau past the support: the level integral is already flat there
    x = box(1, 1)
    tr = majorant_pair(x, 3, F(1, 2))
    assert tr.case_tag == "affine_gap"
    assert tr.gamma == F(1, 2)
    assert tr.beta == 6
    assert tr.xi == F(1, 11)
    _assert_trace_invariants(x, F(3), F(1, 2), tr)


def test_majorant_pair_preconditions():
    x = box(1, 1)
    with pytest.raises(EmptyFamilyError):
        majorant_pair(x, F(1, 2), F(1, 2))  # eps = Phi_x(tau)
    with pytest.raises(EmptyFamilyError):
        majorant_pair(x, F(1, 2), 3)
    with pytest.raises(PreconditionError):
        majorant_pair(x, 0, F(1, 4))
    with pytest.raises(PreconditionError):
        majorant_pair(canonicalize([1, 2], [1, 2], 0, INF), 1, F(1, 4))
    with pytest.raises(PreconditionError):
        majorant_pair(constant(1, INF), 1, F(1, 2))  # nonzero value at infinity
    with pytest.raises(PreconditionError):
        majorant_pair(box(1, F(1, 2), alpha=1), F(1, 4), F(1, 8))


def test_sample_member_seed_zero_is_scaled_base():
    x = canonicalize([1, 4], [2, 1], 0, INF)
    tau, eps = F(2), F(1, 5)
    # head integral at tau is 3, so the scale factor is (3 - 1/5)/3 = 14/15
    y = sample_family_member(x, tau, eps, 0)
    assert y == x * F(14, 15)
    assert family_contains(y, x, tau, eps)


def test_sample_member_varied_seeds_always_land_in_family():
    rng = random.Random(4)
    for _ in range(60):
        x = rearrangement(rand_step(rng, INF, max_pieces=6)).star
        if x.support_bound == 0:
            continue
        tau = x.support_bound * F(rng.randint(1, 7), 8)
        head = level_integral(x).value_at(tau)
        if head == 0:
            continue
        eps = head * F(rng.randint(1, 7), 16)
        for seed in range(5):
            y = sample_family_member(x, tau, eps, seed)
            assert family_contains(y, x, tau, eps)
    with pytest.raises(EmptyFamilyError):
        sample_family_member(box(1, 1), F(1, 2), F(1, 2), 1)


def test_majorized_pair_generator_is_sound():
    rng = random.Random(9)
    for _ in range(150):
        alpha = INF if rng.random() < 0.6 else F(1)
        y, x = majorized_pair(rng, alpha)
        assert hlp_compare(y, x).holds


def test_hardy_examples():
    u = box(F(1, 2), 2)
    v = box(1, 1)
    w = box(1, 1)
    assert hardy_check(u, v, w)
    # equality case: u = v
    assert hardy_check(v, v, box(2, 3))


def test_hardy_rejects_bad_hypothesis_with_witness():
    u = canonicalize([1], [2], 0, INF)  # head integral exceeds v's everywhere
    v = box(1, 1)
    w = box(1, 1)
    with pytest.raises(HypothesisError) as exc:
        hardy_check(u, v, w)
    t = exc.value.witness
    assert t is not None and 0 < t < INF
    assert integrate(u, 0, t) > integrate(v, 0, t)


def test_hardy_rejects_nonmonotone_weight():
    u = box(F(1, 2), 1)
    v = box(1, 1)
    with pytest.raises(PreconditionError):
        hardy_check(u, v, canonicalize([1, 2], [1, 2], 0, INF))


def test_hardy_conclusion_randomized():
    rng = random.Random(21)
    for _ in range(150):
        x = rand_step(rng, INF, max_pieces=5)
        u = rearrangement(x).star * F(rng.randint(0, 8), 8)
        v = rearrangement(x).star
        w = rearrangement(rand_step(rng, INF, max_pieces=4)).star
        lhs_ok = hardy_check(u, v, w)
        assert lhs_ok


def test_maximal_subadditivity_spot():
    rng = random.Random(13)
    for _ in range(100):
        x = rand_step(rng, INF, max_pieces=5)
        y = rand_step(rng, INF, max_pieces=5)
        for k in (F(1, 3), 1, F(7, 2)):
            assert maximal_eval(x + y, k) <= maximal_eval(x, k) + maximal_eval(y, k)
