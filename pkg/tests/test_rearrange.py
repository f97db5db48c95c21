"""Decreasing rearrangement, level integral, maximal function."""

import random
from fractions import Fraction as F

import pytest

from rearrcalc import (
    INF,
    PreconditionError,
    box,
    canonicalize,
    constant,
    distribution,
    equimeasurable,
    level_integral,
    maximal_eval,
    rearrangement,
)
from rearrcalc.gen import _sorted_oracle_star, rand_step


def test_distribution_examples():
    x = box(1, 1)
    assert distribution(x, 0) == 1
    assert distribution(x, 1) == 0
    z = constant(0, INF)
    for lam in (0, 1, F(1, 3)):
        assert distribution(z, lam) == 0
    s = canonicalize([1, 3], [-2, 1], 0, INF)
    assert distribution(s, F(3, 2)) == 1


def test_rearrangement_sorts_pieces():
    x = canonicalize([1, 2], [1, 2], 0, INF)
    rr = rearrangement(x)
    assert rr.star == canonicalize([1, 2], [2, 1], 0, INF)
    assert rr.star_at_infinity == 0


def test_rearrangement_with_nonzero_tail():
    rr = rearrangement(constant(1, INF))
    assert rr.star == constant(1, INF)
    assert rr.star_at_infinity == 1

    # pieces below the tail level are absorbed by the plateau
    x = canonicalize([1, 2], [F(1, 2), 3], 1, INF)
    rr = rearrangement(x)
    assert rr.star == canonicalize([1], [3], 1, INF)
    assert rr.star_at_infinity == 1


def test_rearrangement_takes_absolute_value():
    x = canonicalize([1, 3], [-2, 1], 0, INF)
    assert rearrangement(x).star == canonicalize([1, 3], [2, 1], 0, INF)


def test_level_integral_examples():
    phi = level_integral(box(1, 1))
    assert phi.cuts == (F(1),)
    assert phi.node_values == (F(1),)
    assert phi.final_slope == 0
    assert phi.value_at(F(1, 2)) == F(1, 2)
    assert phi.value_at(7) == 1

    phi = level_integral(canonicalize([1, 3], [2, 1], 0, INF))
    assert phi.cuts == (F(1), F(3))
    assert phi.node_values == (F(2), F(4))
    assert phi.final_slope == 0

    assert level_integral(constant(0, INF)).value_at(9) == 0


def test_maximal_eval_examples():
    x = canonicalize([1, 3], [2, 1], 0, INF)
    assert maximal_eval(x, 2) == F(3, 2)
    assert maximal_eval(x, 4) == 1
    assert maximal_eval(constant(3, INF), 7) == 3
    assert maximal_eval(box(1, 1), F(1, 2)) == 1
    with pytest.raises(PreconditionError):
        maximal_eval(x, 0)


def test_maximal_saturates_on_unit_domain():
    x = box(2, F(1, 2), alpha=1)
    # integral over [0,1) is 1; for t >= 1 the average keeps the frozen mass
    assert maximal_eval(x, 1) == 1
    assert maximal_eval(x, 4) == F(1, 4)


def test_equimeasurable():
    a = canonicalize([1, 2], [1, 2], 0, INF)
    b = canonicalize([1, 2], [2, 1], 0, INF)
    assert equimeasurable(a, b)
    assert not equimeasurable(a, box(2, 2))


def test_star_against_sort_oracle_seeded():
    rng = random.Random(31)
    for _ in range(300):
        alpha = INF if rng.random() < 0.7 else F(1)
        x = rand_step(rng, alpha, max_pieces=8, nonzero_tail=True)
        star = rearrangement(x).star
        assert star == _sorted_oracle_star(x)
        # the star is equimeasurable with x and idempotent
        assert equimeasurable(star, x)
        assert rearrangement(star).star == star


def test_distribution_matches_star_at_all_levels():
    rng = random.Random(32)
    for _ in range(200):
        x = rand_step(rng, INF, max_pieces=6, nonzero_tail=True)
        star = rearrangement(x).star
        levels = {abs(v) for v in x.values} | {abs(x.tail), F(0)}
        for lam in levels:
            assert distribution(x, lam) == distribution(star, lam)
            assert distribution(x, lam + F(1, 7)) == distribution(star, lam + F(1, 7))
