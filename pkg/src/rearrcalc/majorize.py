"""Hardy-Littlewood-Polya majorization and the two-majorant construction.

Write y ≺ x when int_0^t y* <= int_0^t x* for every t > 0.  This module
decides the relation exactly (with a rational witness on failure), decides
membership in the order-interval section

    M(x, tau, eps) = { y : y = y*, y ≺ x, Phi_y(tau) + eps <= Phi_x(tau) },

and constructs, for a nonincreasing x on [0, inf) with x*(inf) = 0 and
0 < eps < Phi_x(tau), a pair z, w of nonincreasing majorized functions whose
order intervals cover M(x, tau, eps):

    every y in M(x, tau, eps) satisfies y ≺ z or y ≺ w,

with z, w != x and z in M(x, tau - tau1, eps1), w in M(x, tau + tau1, eps1)
for the reported tau1, eps1.  The geometry: p = Phi_x(tau) - eps, gamma the
least t with Phi_x(t) = p, beta the least t > tau where the ray of slope
p/tau meets Phi_x again, and xi the slope of the chord of Phi_x over
[gamma, beta].  When the chord lies strictly below Phi_x somewhere inside
(case tag ``affine_gap``) a single averaging of x over [gamma, beta) gives
z = w.  When Phi_x is affine on [gamma, beta] (case tag ``affine_chord``)
the chord is lowered by eps' = min(eps, phi(0)/2), where phi(0) > 0 is the
chord's intercept, and the two crossings gamma1 < gamma0 and beta1 > beta of
the lowered chord with Phi_x give two genuinely different averagings, z over
[gamma1, tau) and w over [gamma, beta1).  All quantities are exact rationals
and are returned in a ConstructionTrace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    EmptyFamilyError,
    HypothesisError,
    InfiniteIntegralError,
    PreconditionError,
)
from .rearrange import level_integral, rearrangement, _phi_saturated
from .stepfn import (
    INF,
    Ext,
    PiecewiseLinearConcave,
    StepFunction,
    _require_same_domain,
    block,
    canonicalize,
    rat,
    rat_str,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class HlpVerdict:
    """Outcome of an exact ≺ comparison.

    When ``holds`` is False, ``witness`` is a rational t > 0 inside the
    domain with Phi_y(witness) > Phi_x(witness).
    """

    holds: bool
    witness: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "witness": None if self.witness is None else rat_str(self.witness),
        }


# -- exact comparison of concave piecewise-linear functions -----------------


def _branch_on(f: PiecewiseLinearConcave, lo: Fraction, hi: Fraction):
    """(intercept, slope) of f on a subinterval (lo, hi) containing no node."""
    t1 = lo + (hi - lo) / 3
    t2 = lo + 2 * (hi - lo) / 3
    v1, v2 = f.value_at(t1), f.value_at(t2)
    slope = (v2 - v1) / (t2 - t1)
    return v1 - slope * t1, slope


def _positive_point_on(f, g, lo: Fraction, hi: Fraction) -> Fraction:
    """Some t in (lo, hi) with f(t) > g(t), given one exists (f-g linear there)."""
    af, bf = _branch_on(f, lo, hi)
    ag, bg = _branch_on(g, lo, hi)
    da, db = af - ag, bf - bg
    candidates = [lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3]
    if db != 0:
        root = -da / db
        if lo < root < hi:
            candidates += [(lo + root) / 2, (root + hi) / 2]
    for t in candidates:
        if da + db * t > 0:
            return t
    raise AssertionError("no positive point found on a segment that must contain one")


def plc_dominated_by(f: PiecewiseLinearConcave, g: PiecewiseLinearConcave):
    """Decide f <= g on (0, alpha); returns (holds, witness-or-None).

    Both functions are piecewise linear, so a violation, if any, shows at a
    node of either, near 0 (right-limits), or on the unbounded final branch;
    between those points the difference is linear.
    """
    if f.alpha != g.alpha:
        raise PreconditionError("cannot compare functions on different domains")
    cs = sorted({*f.cuts, *g.cuts})
    for t in cs:
        if f.value_at(t) > g.value_at(t):
            return False, t
    if f.jump0 > g.jump0:
        hi = cs[0] if cs else (_ONE / 2 if f.alpha != INF else _ONE)
        return False, _positive_point_on(f, g, _ZERO, hi)
    if f.alpha != INF:
        if f.value_at(f.alpha) > g.value_at(g.alpha):
            lo = cs[-1] if cs else _ZERO
            return False, _positive_point_on(f, g, lo, f.alpha)
    else:
        af, bf = f.final_branch()
        ag, bg = g.final_branch()
        if bf > bg:
            start = cs[-1] if cs else _ZERO
            crossing = (ag - af) / (bf - bg)
            return False, max(start, crossing) + 1
    return True, None


def hlp_compare(y: StepFunction, x: StepFunction) -> HlpVerdict:
    """Decide y ≺ x (int_0^t y* <= int_0^t x* for all t) exactly."""
    _require_same_domain(y, x)
    holds, witness = plc_dominated_by(level_integral(y), level_integral(x))
    return HlpVerdict(holds, witness)


def is_decreasing_rearrangement(f: StepFunction) -> bool:
    """True when f is its own decreasing rearrangement (f = f* a.e.)."""
    return rearrangement(f).star == f


def _require_star(x: StepFunction, role: str) -> None:
    if not is_decreasing_rearrangement(x):
        raise PreconditionError(
            f"{role} must be nonnegative and nonincreasing (equal to its "
            "own decreasing rearrangement)"
        )


def family_contains(y: StepFunction, x: StepFunction, tau, eps) -> bool:
    """Membership of y in M(x, tau, eps); x must be nonincreasing."""
    _require_same_domain(y, x)
    tau, eps = rat(tau), rat(eps)
    if tau <= 0 or eps <= 0:
        raise PreconditionError(f"need tau > 0 and eps > 0, got tau={tau}, eps={eps}")
    _require_star(x, "x")
    if not is_decreasing_rearrangement(y):
        return False
    if not hlp_compare(y, x).holds:
        return False
    phi_y = _phi_saturated(level_integral(y), tau)
    phi_x = _phi_saturated(level_integral(x), tau)
    return phi_y + eps <= phi_x


# -- the construction --------------------------------------------------------


@dataclass(frozen=True)
class ConstructionTrace:
    """Exact geometry of the two-majorant construction.

    Case tags: ``affine_gap`` when the chord of Phi_x over [gamma, beta]
    dips strictly below Phi_x inside (then z = w); ``affine_chord`` when
    Phi_x is affine there (then gamma0, gamma1, beta1 are set and z != w).
    z lies in M(x, tau - tau1, eps1) and w in M(x, tau + tau1, eps1); every
    member of M(x, tau, eps) is majorized by z or by w.
    """

    case_tag: str
    gamma: Fraction
    beta: Fraction
    xi: Fraction
    z: StepFunction
    w: StepFunction
    tau1: Fraction
    eps1: Fraction
    gamma0: Optional[Fraction] = None
    gamma1: Optional[Fraction] = None
    beta1: Optional[Fraction] = None

    def to_json(self) -> dict:
        opt = lambda v: None if v is None else rat_str(v)
        return {
            "case_tag": self.case_tag,
            "gamma": rat_str(self.gamma),
            "beta": rat_str(self.beta),
            "xi": rat_str(self.xi),
            "gamma0": opt(self.gamma0),
            "gamma1": opt(self.gamma1),
            "beta1": opt(self.beta1),
            "tau1": rat_str(self.tau1),
            "eps1": rat_str(self.eps1),
            "z": self.z.to_json(),
            "w": self.w.to_json(),
        }


def _least_above_level(phi: PiecewiseLinearConcave, p: Fraction) -> Fraction:
    """Least t with phi(t) = p, for 0 < p <= sup phi; phi(0) = 0, jump0 = 0."""
    prev_s, prev_v = _ZERO, _ZERO
    for s, v in zip(phi.cuts, phi.node_values):
        if v >= p:
            return prev_s + (p - prev_v) / ((v - prev_v) / (s - prev_s))
        prev_s, prev_v = s, v
    if phi.final_slope <= 0:
        raise PreconditionError(f"level {p} is never reached")
    return prev_s + (p - prev_v) / phi.final_slope


def _least_crossing_down(phi: PiecewiseLinearConcave, a: Fraction, b: Fraction,
                         start: Fraction) -> Fraction:
    """Least t >= start with phi(t) <= a + b*t, given phi(start) > a + b*start.

    Requires the line to overtake phi eventually (b larger than the final
    slope, or the domain to end first for alpha = 1... callers guarantee it).
    """
    d_prev = phi.value_at(start) - (a + b * start)
    t_prev = start
    for s in phi.cuts:
        if s <= start:
            continue
        d = phi.value_at(s) - (a + b * s)
        if d <= 0:
            return t_prev + d_prev * (s - t_prev) / (d_prev - d)
        t_prev, d_prev = s, d
    af, bf = phi.final_branch()
    if b <= bf:
        raise PreconditionError("line never meets the function again")
    return (af - a) / (b - bf)


def _coincidence_left_end(phi: PiecewiseLinearConcave, a: Fraction, b: Fraction,
                          gamma: Fraction) -> Fraction:
    """Least t with phi(t) = a + b*t, given coincidence at gamma.

    phi is concave and agrees with the line on an interval of positive
    length, so phi <= line everywhere and the coincidence set is a closed
    interval whose left endpoint is a node of phi, or 0.  The smallest
    coinciding candidate is therefore the endpoint itself.
    """
    if a == 0:  # the line passes through the origin, where phi(0) = 0
        return _ZERO
    for s, v in zip(phi.cuts, phi.node_values):
        if s < gamma and v == a + b * s:
            return s
    return gamma


def _first_rise_to_line(phi: PiecewiseLinearConcave, a: Fraction, b: Fraction,
                        hi: Fraction) -> Fraction:
    """Unique t in (0, hi) with phi(t) = a + b*t, given phi < line near 0
    and phi(hi) > a + b*hi (difference concave, single sign change)."""
    t_prev, d_prev = _ZERO, -(a)  # phi(0)=0, jump0=0
    for s in phi.cuts:
        if s >= hi:
            break
        d = phi.value_at(s) - (a + b * s)
        if d >= 0:
            return t_prev + (-d_prev) * (s - t_prev) / (d - d_prev)
        t_prev, d_prev = s, d
    d_hi = phi.value_at(hi) - (a + b * hi)
    return t_prev + (-d_prev) * (hi - t_prev) / (d_hi - d_prev)


def _flatten(x: StepFunction, a: Fraction, b: Fraction) -> StepFunction:
    """Replace x on [a, b) by its average there; x is nonincreasing."""
    phi = level_integral(x)
    avg = (phi.value_at(b) - phi.value_at(a)) / (b - a)
    return x.window(0, a) + block(avg, a, b, x.alpha) + x.window(b, None)


def majorant_pair(x: StepFunction, tau, eps) -> ConstructionTrace:
    """Construct the covering pair z, w for M(x, tau, eps) with full geometry.

    Preconditions: x on [0, inf) with x = x* and x*(inf) = 0; tau > 0;
    0 < eps < Phi_x(tau).  The ray and chord intersections used by the
    construction need the running integral to go flat eventually, which is
    exactly the half-line case with vanishing rearrangement at infinity;
    alpha = 1 inputs are rejected.
    """
    tau, eps = rat(tau), rat(eps)
    if x.alpha != INF:
        raise PreconditionError(
            "construction requires the domain [0, inf): on [0, 1) the ray "
            "of slope (Phi_x(tau) - eps)/tau need not meet Phi_x again"
        )
    _require_star(x, "x")
    if rearrangement(x).star_at_infinity != 0:
        raise PreconditionError("construction requires x*(inf) = 0")
    if tau <= 0 or eps <= 0:
        raise PreconditionError(f"need tau > 0 and eps > 0, got tau={tau}, eps={eps}")
    phi = level_integral(x)
    phi_tau = phi.value_at(tau)
    if eps >= phi_tau:
        raise EmptyFamilyError(
            f"eps = {rat_str(eps)} >= Phi_x(tau) = {rat_str(phi_tau)}: "
            "M(x, tau, eps) contains no nonzero member and the construction "
            "needs Phi_x(tau) - eps > 0"
        )
    p = phi_tau - eps
    gamma = _least_above_level(phi, p)
    beta = _least_crossing_down(phi, _ZERO, p / tau, tau)
    xi = (phi.value_at(beta) - p) / (beta - gamma)
    # does the chord over [gamma, beta] dip strictly below phi inside?
    chord_a = p - xi * gamma
    affine = all(
        phi.value_at(s) == chord_a + xi * s
        for s in phi.cuts
        if gamma < s < beta
    )
    if not affine:
        z = _flatten(x, gamma, beta)
        w = z
        tau1 = min(tau - gamma, beta - tau) / 2
        gamma0 = gamma1 = beta1 = None
        case_tag = "affine_gap"
    else:
        gamma0 = _coincidence_left_end(phi, chord_a, xi, gamma)
        if gamma0 <= 0:
            raise AssertionError("chord through the origin cannot be affine-coincident")
        eps_prime = min(eps, chord_a / 2)
        gamma1 = _first_rise_to_line(phi, chord_a - eps_prime, xi, gamma0)
        beta1 = _least_crossing_down(phi, chord_a - eps_prime, xi, beta)
        z = _flatten(x, gamma1, tau)
        w = _flatten(x, gamma, beta1)
        tau1 = min(tau - gamma1, beta1 - tau) / 2
        case_tag = "affine_chord"
        if not (0 < gamma1 < gamma0 <= gamma < beta < beta1):
            raise AssertionError("construction ordering violated")
    if not (0 < gamma < tau < beta):
        raise AssertionError("gamma < tau < beta violated")
    eps1 = min(
        phi.value_at(tau - tau1) - level_integral(z).value_at(tau - tau1),
        phi.value_at(tau + tau1) - level_integral(w).value_at(tau + tau1),
    )
    if not (0 < tau1 < tau and eps1 > 0):
        raise AssertionError("tau1/eps1 positivity violated")
    return ConstructionTrace(
        case_tag=case_tag, gamma=gamma, beta=beta, xi=xi, z=z, w=w,
        tau1=tau1, eps1=eps1, gamma0=gamma0, gamma1=gamma1, beta1=beta1,
    )


def sample_family_member(x: StepFunction, tau, eps, seed: int) -> StepFunction:
    """A deterministic pseudo-random member of M(x, tau, eps).

    Same preconditions as majorant_pair.  seed = 0 always returns the scaled
    copy ((Phi_x(tau) - eps)/Phi_x(tau)) * x; other seeds mix scaling,
    head-averaging, and independently drawn shapes fitted under x.
    """
    tau, eps = rat(tau), rat(eps)
    if x.alpha != INF:
        raise PreconditionError("sampling requires the domain [0, inf)")
    _require_star(x, "x")
    if rearrangement(x).star_at_infinity != 0:
        raise PreconditionError("sampling requires x*(inf) = 0")
    if tau <= 0 or eps <= 0:
        raise PreconditionError(f"need tau > 0 and eps > 0, got tau={tau}, eps={eps}")
    phi = level_integral(x)
    phi_tau = phi.value_at(tau)
    if eps >= phi_tau:
        raise EmptyFamilyError(
            f"eps = {rat_str(eps)} >= Phi_x(tau) = {rat_str(phi_tau)}: "
            "no nonzero member to sample"
        )
    rng = random.Random(seed)
    strategy = 0 if seed == 0 else rng.choice(["scale", "head", "shape"])
    if strategy == 0 or strategy == "scale":
        c = (phi_tau - eps) / phi_tau
        if strategy == "scale":
            c *= Fraction(rng.randint(1, 16), 16)
        return x.scale(c)
    if strategy == "head":
        bound = max(x.support_bound, tau, 1)
        r = Fraction(rng.randint(1, 4 * bound.numerator * bound.denominator),
                     2 * bound.denominator ** 2)
        y0 = _flatten(x, _ZERO, r) if r > 0 else x
        m = level_integral(y0).value_at(tau)
        c = min(_ONE, (phi_tau - eps) / m) * Fraction(rng.randint(8, 16), 16)
        return y0.scale(c)
    # independently drawn nonincreasing shape, scaled to fit under Phi_x
    for _ in range(64):
        k = rng.randint(1, 6)
        lengths = [Fraction(rng.randint(1, 12), rng.randint(1, 6)) for _ in range(k)]
        drops = [Fraction(rng.randint(1, 12), rng.randint(1, 6)) for _ in range(k)]
        values = []
        total_drop = sum(drops)
        for d in drops:
            values.append(total_drop)
            total_drop -= d
        cuts, acc = [], _ZERO
        for l in lengths:
            acc += l
            cuts.append(acc)
        v = canonicalize(cuts, values, 0, INF)
        phi_v = level_integral(v)
        if phi_v.value_at(tau) == 0:
            continue
        ratios = [phi_tau / phi_v.value_at(tau)]
        head_x = x.values[0] if x.cuts else x.tail
        ratios.append(head_x / values[0])
        for u in sorted({*phi.cuts, *phi_v.cuts, tau}):
            if phi_v.value_at(u) > 0:
                ratios.append(phi.value_at(u) / phi_v.value_at(u))
        mass_x, mass_v = phi.limit_value(), phi_v.limit_value()
        ratios.append(mass_x / mass_v)
        c = min(min(ratios), (phi_tau - eps) / phi_v.value_at(tau))
        if c <= 0:
            continue
        y = v.scale(c * Fraction(rng.randint(8, 16), 16))
        if family_contains(y, x, tau, eps):
            return y
    # fall back to the always-valid scaled copy
    return x.scale((phi_tau - eps) / phi_tau)


# -- Hardy's lemma ------------------------------------------------------------


def _cumulative_dominated(u: StepFunction, v: StepFunction):
    """Check int_0^t u <= int_0^t v for all t; returns (holds, witness)."""
    cs = sorted({*u.cuts, *v.cuts})
    acc_u = acc_v = _ZERO
    prev = _ZERO
    for c in cs:
        acc_u += u(prev) * (c - prev)
        acc_v += v(prev) * (c - prev)
        if acc_u > acc_v:
            return False, c
        prev = c
    du, dv = u(prev), v(prev)  # final piece slopes
    if u.alpha != INF:
        end_u = acc_u + du * (u.alpha - prev)
        end_v = acc_v + dv * (v.alpha - prev)
        if end_u > end_v:
            # crossing inside (prev, 1); the difference is linear there
            root = prev + (acc_v - acc_u) / (du - dv)
            return False, (max(root, prev) + u.alpha) / 2
    elif du > dv:
        root = prev + (acc_v - acc_u) / (du - dv)
        return False, max(root, prev) + 1
    return True, None


def _integral_product(f: StepFunction, g: StepFunction) -> Ext:
    """int_0^alpha f*g exactly; INF when the product has a nonzero tail on [0,inf)."""
    _require_same_domain(f, g)
    cs = sorted({*f.cuts, *g.cuts})
    total = _ZERO
    prev = _ZERO
    for c in cs:
        total += f(prev) * g(prev) * (c - prev)
        prev = c
    tail_prod = f(prev) * g(prev)
    if f.alpha != INF:
        return total + tail_prod * (f.alpha - prev)
    if tail_prod == 0:
        return total
    if tail_prod < 0:
        raise InfiniteIntegralError("product integral diverges to -inf")
    return INF


def hardy_check(u: StepFunction, v: StepFunction, w: StepFunction) -> bool:
    """Verify the weighted-domination implication for one exact triple.

    Hypotheses: u, v >= 0 with int_0^t u <= int_0^t v for all t, and w
    nonnegative nonincreasing.  Violated hypotheses raise HypothesisError
    with an exact witness; otherwise returns int u*w <= int v*w (which the
    lemma guarantees, so a False return would expose an arithmetic bug).
    """
    _require_same_domain(u, v)
    _require_same_domain(u, w)
    if not u.is_nonnegative():
        raise HypothesisError("u must be nonnegative", None)
    if not v.is_nonnegative():
        raise HypothesisError("v must be nonnegative", None)
    if not is_decreasing_rearrangement(w):
        raise HypothesisError("w must be nonnegative and nonincreasing", None)
    holds, witness = _cumulative_dominated(u, v)
    if not holds:
        raise HypothesisError(
            f"cumulative domination fails at t = {rat_str(witness)}: "
            "int_0^t u > int_0^t v", witness,
        )
    lhs = _integral_product(u, w)
    rhs = _integral_product(v, w)
    if rhs == INF:
        return True
    if lhs == INF:
        return False
    return lhs <= rhs
