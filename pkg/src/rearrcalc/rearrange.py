"""Decreasing rearrangements of step functions, exactly.

For a step function x on [0, alpha), the distribution function
d_x(lam) = mu{ |x| > lam } and the decreasing rearrangement
x*(t) = inf{ lam : d_x(lam) <= t } are computed by sorting the pieces of |x|
by value.  On [0, inf) a nonzero eventual value |tail| acts as an infinite
plateau: pieces with |value| <= |tail| are absorbed by it, larger ones stack
in front, and x*(inf) = |tail|.  The running integral Phi_x(t) = int_0^t x*
is the increasing concave piecewise-linear ``level_integral``, and the
maximal function is x**(t) = Phi_x(t)/t, with Phi_x frozen at its limit for
t >= 1 when alpha = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .stepfn import (
    INF,
    Ext,
    PiecewiseLinearConcave,
    StepFunction,
    _require_same_domain,
    exceedance_measure,
    rat,
)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class RearrangementResult:
    """The rearrangement star = x*, its running integral, and x*(inf).

    ``star_at_infinity`` is the limit of x* at the right end of the domain:
    the absolute tail value when alpha = inf, and the last piece's value when
    alpha = 1 (where it is only the left limit at 1).
    """

    star: StepFunction
    level_integral: PiecewiseLinearConcave
    star_at_infinity: Fraction


def distribution(x: StepFunction, lam) -> Ext:
    """d_x(lam) = mu{ t : |x(t)| > lam }; INF when a level set is unbounded."""
    return exceedance_measure(x, lam)


@lru_cache(maxsize=8192)
def _rearrange(x: StepFunction) -> RearrangementResult:
    finite: list[tuple[Fraction, Fraction]] = []  # (value, length) with |value|
    for s, e, v in x.pieces():
        if e != INF:
            finite.append((abs(v), e - s))
    plateau = abs(x.tail)
    if x.alpha == INF:
        finite = [(v, l) for v, l in finite if v > plateau]
    # sort by value, descending, merging equal values
    finite.sort(key=lambda p: p[0], reverse=True)
    merged: list[tuple[Fraction, Fraction]] = []
    for v, l in finite:
        if merged and merged[-1][0] == v:
            merged[-1] = (v, merged[-1][1] + l)
        else:
            merged.append((v, l))
    if x.alpha != INF:
        # the last sorted piece is the tail of the rearrangement
        plateau = merged.pop()[0] if merged else plateau
    cuts: list[Fraction] = []
    values: list[Fraction] = []
    acc = _ZERO
    for v, l in merged:
        acc += l
        cuts.append(acc)
        values.append(v)
    star = StepFunction(x.alpha, tuple(cuts), tuple(values), plateau)
    # running integral of the star: one node per cut, then slope = plateau
    node_values: list[Fraction] = []
    total = _ZERO
    prev = _ZERO
    for c, v in zip(star.cuts, star.values):
        total += v * (c - prev)
        node_values.append(total)
        prev = c
    phi = PiecewiseLinearConcave(
        x.alpha, star.cuts, tuple(node_values), final_slope=star.tail
    )
    return RearrangementResult(star, phi, plateau if x.alpha == INF else star.tail)


def rearrangement(x: StepFunction) -> RearrangementResult:
    """Decreasing rearrangement of x with its running integral."""
    return _rearrange(x)


def level_integral(x: StepFunction) -> PiecewiseLinearConcave:
    """Phi_x(t) = int_0^t x*, as an exact concave piecewise-linear function."""
    return _rearrange(x).level_integral


def _phi_saturated(phi: PiecewiseLinearConcave, t: Fraction) -> Fraction:
    """Phi evaluated with the alpha=1 convention Phi(t) = Phi(1-) for t >= 1."""
    if phi.alpha != INF and t >= phi.alpha:
        return phi.value_at(phi.alpha)
    return phi.value_at(t)


def maximal_eval(x: StepFunction, t) -> Fraction:
    """x**(t) = (1/t) int_0^t x* for t > 0 (integral frozen past 1 when alpha=1)."""
    t = rat(t)
    if t <= 0:
        raise PreconditionError(f"maximal function needs t > 0, got {t}")
    return _phi_saturated(_rearrange(x).level_integral, t) / t


def equimeasurable(x: StepFunction, y: StepFunction) -> bool:
    """True when |x| and |y| have identical distribution functions."""
    _require_same_domain(x, y)
    return _rearrange(x).star == _rearrange(y).star
