"""Seeded random generators, property suites, and a counterexample shrinker.

The suites here back both the test suite and the CLI ``prop-test`` command,
so they are deterministic functions of (cases, seed) and report failures as
JSON-ready dicts holding minimized inputs.  Shrinking is structural: drop
pieces of the offending step functions, then simplify the rationals, while
the failure predicate keeps failing.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import majorize, rearrange, spaces
from .errors import HypothesisError, RearrCalcError
from .stepfn import (
    INF,
    Ext,
    StepFunction,
    block,
    box,
    canonicalize,
    combine,
    constant,
    integrate,
    plc_from_nodes,
    rat_str,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(rng: random.Random, max_num=24, max_den=8) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def rand_step(rng: random.Random, alpha: Ext = INF, max_pieces: int = 12,
              signed: bool = True, nonzero_tail: bool = False) -> StepFunction:
    """A random canonical step function with small rational data."""
    k = rng.randint(0, max_pieces)
    if alpha == INF:
        cuts, acc = [], _ZERO
        for _ in range(k):
            acc += _frac(rng)
            cuts.append(acc)
    else:
        pool = sorted({Fraction(rng.randint(1, 47), 48) for _ in range(k)})
        cuts = pool
    def value() -> Fraction:
        v = _frac(rng) if rng.random() < 0.9 else _ZERO
        return -v if signed and rng.random() < 0.4 else v
    values = [value() for _ in cuts]
    if alpha == INF:
        tail = value() if nonzero_tail and rng.random() < 0.5 else _ZERO
    else:
        tail = value()
    return canonicalize(cuts, values, tail, alpha)


def rand_star(rng: random.Random, alpha: Ext = INF, max_pieces: int = 8,
              min_pieces: int = 1) -> StepFunction:
    """A random nonzero decreasing rearrangement (tail 0 when alpha = inf)."""
    k = rng.randint(min_pieces, max_pieces)
    drops = [_frac(rng, 12, 6) for _ in range(k)]
    total = sum(drops)
    values = []
    for d in drops:
        values.append(total)
        total -= d
    if alpha == INF:
        cuts, acc = [], _ZERO
        for _ in range(k):
            acc += _frac(rng)
            cuts.append(acc)
        return canonicalize(cuts, values, 0, INF)
    pool = sorted({Fraction(rng.randint(1, 47), 48) for _ in range(k)})
    j = len(pool)  # distinct cuts inside (0, 1); may be fewer than k
    tail = values[j] if j < len(values) else _ZERO
    return canonicalize(pool, values[:j], tail, alpha)


def rand_phi(rng: random.Random, alpha: Ext = INF, force_pl: bool = False):
    """A random fundamental function (piecewise-linear concave or hyperbola)."""
    if not force_pl and rng.random() < 0.3:
        return spaces.Hyperbolic(_frac(rng, 12, 6))
    k = rng.randint(0, 4)
    jump0 = _frac(rng, 6, 6) if rng.random() < 0.3 else _ZERO
    drops = [_frac(rng, 6, 6) for _ in range(k + 1)]
    slopes = []
    total = sum(drops)
    for d in drops:
        slopes.append(total)
        total -= d
    final = slopes[-1] if rng.random() < 0.3 else _ZERO
    if jump0 == 0 and slopes[0] == 0:
        jump0 = _ONE
    cuts, acc = [], _ZERO
    vals, v = [], jump0
    for m in slopes[:k]:
        step = _frac(rng, 8, 4) if alpha == INF else Fraction(rng.randint(1, 11), 48)
        acc += step
        if alpha != INF and acc >= 1:
            break
        v += m * step
        cuts.append(acc)
        vals.append(v)
    return plc_from_nodes(cuts, vals, final if cuts else slopes[0], jump0, alpha)


def rand_space(rng: random.Random, alpha: Ext = INF,
               kinds=spaces._KINDS) -> spaces.SpaceSpec:
    kind = rng.choice(list(kinds))
    if kind in spaces._PHI_KINDS:
        return spaces.SpaceSpec(kind, rand_phi(rng, alpha), alpha)
    return spaces.SpaceSpec(kind, None, alpha)


def prop32_instance(rng: random.Random, plateau: bool):
    """(x, tau, eps) on [0, inf) with x = x*, x*(inf)=0, 0 < eps < Phi_x(tau).

    plateau=True plants a long flat run of x around tau and chooses eps small
    enough that the construction meets its affine-chord case; plateau=False
    aims at the affine-gap case by putting the plateau first (the running
    integral is then strictly concave past it) or using a generic star.
    """
    if plateau:
        head = [_frac(rng, 12, 4) + 1 for _ in range(rng.randint(1, 3))]
        head.sort(reverse=True)
        v = _frac(rng, 6, 4)
        head = [h + v for h in head]
        a, acc = [], _ZERO
        for _ in head:
            acc += _frac(rng, 4, 4)
            a.append(acc)
        start = acc
        length = _frac(rng, 12, 2) + 4
        b = start + length
        x = canonicalize(a + [b], head + [v], 0, INF)
        tau = start + length * Fraction(rng.randint(1, 3), 4)
        phi = rearrange.level_integral(x)
        phi_tau = phi.value_at(tau)
        # keep the lowered level inside the plateau's affine stretch
        gap_cap = min(phi_tau - phi.value_at(start), v * (b - start) / 4)
        eps = gap_cap * Fraction(rng.randint(1, 7), 8)
        if eps <= 0 or eps >= phi_tau:
            return prop32_instance(rng, plateau)
        return x, tau, eps
    x = rand_star(rng, INF, max_pieces=6)
    phi = rearrange.level_integral(x)
    support = x.support_bound
    tau = support * Fraction(rng.randint(1, 7), 8)
    if tau <= 0:
        return prop32_instance(rng, plateau)
    phi_tau = phi.value_at(tau)
    eps = phi_tau * Fraction(rng.randint(1, 7), 16)
    if eps <= 0 or eps >= phi_tau:
        return prop32_instance(rng, plateau)
    return x, tau, eps


def majorized_pair(rng: random.Random, alpha: Ext = INF):
    """(y, x) with y ≺ x by construction."""
    x = rand_step(rng, alpha, max_pieces=8)
    star = rearrange.rearrangement(x).star
    mode = rng.randrange(3)
    if mode == 0:
        c = Fraction(rng.randint(0, 16), 16)
        return star.scale(c), x
    if mode == 1 and alpha == INF and star.tail == 0 and star != constant(0, INF):
        phi = rearrange.level_integral(x)
        tau = max(star.support_bound, 1) * Fraction(rng.randint(1, 8), 8)
        phi_tau = phi.value_at(tau)
        if phi_tau > 0:
            eps = phi_tau * Fraction(rng.randint(1, 7), 8)
            y = majorize.sample_family_member(star, tau, eps, rng.getrandbits(31))
            return y, x
    # average the star over a random prefix: the running integral drops to
    # its chord there, so the result is majorized
    if star.support_bound > 0:
        r = star.support_bound * Fraction(rng.randint(1, 16), 8)
        if alpha != INF and r >= 1:
            r = (star.support_bound + 1) / 2
        big = rearrange.level_integral(star)
        avg = big.value_at(r) / r
        y = block(avg, 0, r, alpha) + star.window(r, None)
        return y, x
    return star, x


# -- suites -------------------------------------------------------------------


@dataclass
class SuiteResult:
    suite: str
    cases: int
    seed: int
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "seed": self.seed,
            "ok": self.ok,
            "stats": self.stats,
            "failures": self.failures,
        }


def _sorted_oracle_star(x: StepFunction) -> StepFunction:
    """Independent rearrangement oracle: raw sort of |x| piece data."""
    items = []
    for s, e, v in x.pieces():
        if e == INF:
            continue
        items.append((abs(v), e - s))
    items.sort(key=lambda p: p[0], reverse=True)
    plateau = abs(x.tail) if x.alpha == INF else None
    if plateau is not None:
        items = [(v, l) for v, l in items if v > plateau]
    cuts, values, acc = [], [], _ZERO
    for v, l in items:
        acc += l
        cuts.append(acc)
        values.append(v)
    if plateau is None:
        tail = values.pop()
        cuts.pop()
        return canonicalize(cuts, values, tail, x.alpha)
    return canonicalize(cuts, values, plateau, INF)


def _distribution_oracle(x: StepFunction, lam: Fraction) -> Ext:
    total = _ZERO
    for s, e, v in x.pieces():
        if abs(v) > lam:
            if e == INF:
                return INF
            total += e - s
    return total


def run_rearrange_suite(cases: int, seed: int) -> SuiteResult:
    """Rearrangement vs an independent sorting oracle; distribution equality;
    equimeasurability; right-continuity flags of the star."""
    rng = random.Random(seed)
    res = SuiteResult("rearrange", cases, seed)
    for i in range(cases):
        alpha = INF if rng.random() < 0.6 else _ONE
        x = rand_step(rng, alpha, nonzero_tail=True)
        star = rearrange.rearrangement(x).star
        problems = []
        oracle = _sorted_oracle_star(x)
        if star != oracle:
            problems.append("star != sorted oracle")
        levels = {abs(v) for v in (*x.values, x.tail)} | {_ZERO}
        levels |= {l + Fraction(1, 3) for l in list(levels)[:4]}
        for lam in levels:
            if rearrange.distribution(x, lam) != _distribution_oracle(star, lam):
                problems.append(f"distribution mismatch at lam={rat_str(lam)}")
                break
        if not rearrange.equimeasurable(x, star):
            problems.append("x not equimeasurable with its star")
        if not majorize.is_decreasing_rearrangement(star):
            problems.append("star is not its own rearrangement")
        if problems:
            case = {"x": x}
            keep = _still_fails_rearrange(problems[0])
            case = shrink_case(case, keep)
            res.failures.append({
                "case": i, "problems": problems,
                "x": case["x"].to_json(),
            })
            if len(res.failures) >= 5:
                break
    return res


def _still_fails_rearrange(problem: str):
    def keep(case: dict) -> bool:
        x = case["x"]
        try:
            star = rearrange.rearrangement(x).star
            if problem == "star != sorted oracle":
                return star != _sorted_oracle_star(x)
            if problem.startswith("distribution"):
                levels = {abs(v) for v in (*x.values, x.tail)} | {_ZERO}
                return any(
                    rearrange.distribution(x, lam) != _distribution_oracle(star, lam)
                    for lam in levels
                )
            if problem == "x not equimeasurable with its star":
                return not rearrange.equimeasurable(x, star)
            return not majorize.is_decreasing_rearrangement(star)
        except RearrCalcError:
            return False
    return keep


def _phi_grid_le(x: StepFunction, y: StepFunction, grid: int) -> Optional[Fraction]:
    """Dense-grid oracle for Phi_x <= Phi_y: checks every grid point t_j = j*h.

    The per-point comparison runs in integer arithmetic (exact): on a node
    interval both functions are affine, so Phi_x(t_j) > Phi_y(t_j) becomes
    n1 + n2*j > 0 for segment-constant integers n1, n2.
    """
    fx = rearrange.level_integral(x)
    fy = rearrange.level_integral(y)
    if x.alpha == INF:
        horizon = max([*fx.cuts, *fy.cuts, _ONE]) + 2
    else:
        horizon = _ONE
    h = horizon / grid
    nodes = sorted({c for c in (*fx.cuts, *fy.cuts) if c < horizon})
    ends = nodes + [horizon]
    lo = _ZERO
    j_lo = 0  # grid points with t_j <= lo are already checked
    for hi in ends:
        probe1 = lo + (hi - lo) / 3
        probe2 = lo + 2 * (hi - lo) / 3

        def branch(f):
            v1, v2 = f.value_at(probe1), f.value_at(probe2)
            slope = (v2 - v1) / (probe2 - probe1)
            return v1 - slope * probe1, slope

        (ax, bx), (ay, by) = branch(fx), branch(fy)
        # difference (ax-ay) + (bx-by)*t at t = j*h, cleared of denominators
        c1 = (ax - ay)
        c2 = (bx - by) * h
        den = c1.denominator * c2.denominator // math.gcd(
            c1.denominator, c2.denominator
        )
        n1 = c1.numerator * (den // c1.denominator)
        n2 = c2.numerator * (den // c2.denominator)
        j_hi = int(hi / h)  # floor: last grid index inside (lo, hi]
        for j in range(j_lo + 1, min(j_hi, grid) + 1):
            if n1 + n2 * j > 0:
                return h * j
        j_lo = max(j_lo, min(j_hi, grid))
        lo = hi
    return None


def run_hlp_suite(cases: int, seed: int, grid: int = 10000) -> SuiteResult:
    """hlp_compare against a dense-grid oracle, witness validity, reflexivity,
    and transitivity along constructed chains."""
    rng = random.Random(seed)
    res = SuiteResult("hlp", cases, seed)
    agree = 0
    for i in range(cases):
        alpha = INF if rng.random() < 0.6 else _ONE
        if rng.random() < 0.5:
            y, x = majorized_pair(rng, alpha)
        else:
            x = rand_step(rng, alpha, max_pieces=8)
            y = rand_step(rng, alpha, max_pieces=8)
        problems = []
        verdict = majorize.hlp_compare(y, x)
        grid_hit = _phi_grid_le(y, x, grid)
        if verdict.holds and grid_hit is not None:
            problems.append(f"grid oracle found violation at t={rat_str(grid_hit)}")
        if not verdict.holds:
            w = verdict.witness
            fy = rearrange.level_integral(y)
            fx = rearrange.level_integral(x)
            if not (0 < w and (x.alpha == INF or w < x.alpha)):
                problems.append("witness outside the domain")
            elif fy.value_at(w) <= fx.value_at(w):
                problems.append("witness does not witness")
        else:
            agree += 1
        if not majorize.hlp_compare(x, x).holds:
            problems.append("reflexivity fails")
        # transitivity along a constructed chain zz ≺ yy ≺ xx
        yy, xx = majorized_pair(rng, alpha)
        zz = rearrange.rearrangement(yy).star.scale(Fraction(rng.randint(0, 8), 8))
        if majorize.hlp_compare(zz, yy).holds and not majorize.hlp_compare(zz, xx).holds:
            res.failures.append({
                "case": i, "problems": ["transitivity fails along a chain"],
                "x": xx.to_json(), "y": yy.to_json(), "z": zz.to_json(),
            })
        if problems:
            def keep(case: dict) -> bool:
                try:
                    v = majorize.hlp_compare(case["y"], case["x"])
                    if v.holds:
                        return _phi_grid_le(case["y"], case["x"], grid) is not None
                    w2 = v.witness
                    fy2 = rearrange.level_integral(case["y"])
                    fx2 = rearrange.level_integral(case["x"])
                    return (
                        not (0 < w2 and (case["x"].alpha == INF or w2 < case["x"].alpha))
                        or fy2.value_at(w2) <= fx2.value_at(w2)
                    )
                except RearrCalcError:
                    return False
            case = shrink_case({"x": x, "y": y}, keep)
            res.failures.append({
                "case": i, "problems": problems,
                "x": case["x"].to_json(), "y": case["y"].to_json(),
            })
            if len(res.failures) >= 5:
                break
    res.stats["holds"] = agree
    return res


def run_prop32_suite(cases: int, seed: int, members_per_case: int = 5) -> SuiteResult:
    """Construction invariants: trace geometry, memberships, z/w != x, and the
    covering property on sampled members."""
    rng = random.Random(seed)
    res = SuiteResult("prop32", cases, seed)
    tags = {"affine_gap": 0, "affine_chord": 0}
    for i in range(cases):
        x, tau, eps = prop32_instance(rng, plateau=bool(i % 2))
        problems = _prop32_problems(x, tau, eps, members_per_case, seed * 1000003 + i)
        trace = None
        try:
            trace = majorize.majorant_pair(x, tau, eps)
            tags[trace.case_tag] += 1
        except RearrCalcError:
            pass
        if problems:
            def keep(case):
                return bool(_prop32_problems(
                    case["x"], case["tau"], case["eps"],
                    members_per_case, seed * 1000003 + i,
                ))
            case = shrink_case({"x": x, "tau": tau, "eps": eps}, keep)
            res.failures.append({
                "case": i, "problems": problems,
                "x": case["x"].to_json(), "tau": rat_str(case["tau"]),
                "eps": rat_str(case["eps"]),
            })
            if len(res.failures) >= 5:
                break
    res.stats["case_tags"] = tags
    return res


def _prop32_problems(x, tau, eps, members: int, member_seed: int) -> list[str]:
    try:
        trace = majorize.majorant_pair(x, tau, eps)
    except RearrCalcError as e:
        return [f"construction raised: {e}"]
    problems = []
    if not (0 < trace.gamma < tau < trace.beta):
        problems.append("gamma < tau < beta violated")
    if not (0 < trace.tau1 < tau) or trace.eps1 <= 0:
        problems.append("tau1/eps1 out of range")
    if trace.case_tag == "affine_chord":
        if not (0 < trace.gamma1 < trace.gamma0 <= trace.gamma < trace.beta < trace.beta1):
            problems.append("case-2 ordering violated")
    for g, label in ((trace.z, "z"), (trace.w, "w")):
        if not majorize.is_decreasing_rearrangement(g):
            problems.append(f"{label} is not nonincreasing")
        if g == x:
            problems.append(f"{label} equals x")
        if not majorize.hlp_compare(g, x).holds:
            problems.append(f"{label} not majorized by x")
    if not majorize.family_contains(trace.z, x, tau - trace.tau1, trace.eps1):
        problems.append("z not in M(x, tau - tau1, eps1)")
    if not majorize.family_contains(trace.w, x, tau + trace.tau1, trace.eps1):
        problems.append("w not in M(x, tau + tau1, eps1)")
    for j in range(members):
        y = majorize.sample_family_member(x, tau, eps, member_seed + j)
        if not majorize.family_contains(y, x, tau, eps):
            problems.append(f"sampled member {j} not in the family")
            continue
        if not (majorize.hlp_compare(y, trace.z).holds
                or majorize.hlp_compare(y, trace.w).holds):
            problems.append(f"sampled member {j} covered by neither z nor w")
    return problems


def run_spaces_suite(cases: int, seed: int) -> SuiteResult:
    """Norm axioms on random functions/spaces: rearrangement invariance,
    homogeneity, triangle (Banach kinds), fundamental-function consistency,
    lattice monotonicity under pointwise domination, majorization
    monotonicity, M* <= M, and embedding into M_{phi_E}."""
    rng = random.Random(seed)
    res = SuiteResult("spaces", cases, seed)
    banach = ("L1", "Linf", "L1plusLinf", "Marcinkiewicz")
    for i in range(cases):
        alpha = INF if rng.random() < 0.6 else _ONE
        space = rand_space(rng, alpha)
        x = rand_step(rng, alpha, max_pieces=6, nonzero_tail=True)
        y = rand_step(rng, alpha, max_pieces=6)
        problems = _space_problems(space, x, y, rng, banach)
        if problems:
            def keep(case):
                try:
                    return bool(_space_problems(
                        space, case["x"], case["y"], random.Random(seed + i), banach
                    ))
                except RearrCalcError:
                    return False
            case = shrink_case({"x": x, "y": y}, keep)
            res.failures.append({
                "case": i, "problems": problems, "space": space.to_json(),
                "x": case["x"].to_json(), "y": case["y"].to_json(),
            })
            if len(res.failures) >= 5:
                break
    return res


def _space_problems(space, x, y, rng, banach) -> list[str]:
    problems = []
    star = rearrange.rearrangement(x).star
    nx = spaces.norm(space, x)
    if nx != spaces.norm(space, star):
        problems.append("norm not rearrangement invariant")
    c = Fraction(rng.randint(0, 12), rng.randint(1, 6))
    sx = spaces.norm(space, x.scale(c))
    if nx == INF:
        if c > 0 and sx != INF:
            problems.append("homogeneity fails at infinite norm")
        if c == 0 and sx != 0:
            problems.append("0 * x must have norm 0")
    elif sx != c * nx:
        problems.append("homogeneity fails")
    if space.kind in banach:
        ny = spaces.norm(space, y)
        if nx != INF and ny != INF and spaces.norm(space, x + y) > nx + ny:
            problems.append("triangle inequality fails")
    if (nx == 0) != (x == constant(0, x.alpha)):
        problems.append("norm zero iff x zero fails")
    t = _frac(rng, 8, 8)
    while t >= space.alpha:
        t /= 2
    if t > 0:
        if spaces.norm(space, box(1, t, space.alpha)) != spaces.fundamental_eval(space, t):
            problems.append("fundamental mismatch with the indicator norm")
    # lattice property: |w| <= |x| pointwise forces norm(w) <= norm(x)
    w = x.window(t, None) if rng.random() < 0.5 else combine(abs(x), abs(y), "min")
    if spaces.norm(space, w) > nx:
        problems.append("norm not monotone under pointwise domination")
    # majorization monotonicity for the kinds where it is a theorem
    if space.kind in ("L1plusLinf", "Marcinkiewicz", "MarcinkiewiczStar"):
        z, xx = majorized_pair(rng, space.alpha)
        if not majorize.hlp_compare(z, xx).holds:
            problems.append("majorized_pair generator broke y ≺ x")
        elif space.kind != "MarcinkiewiczStar":
            if spaces.norm(space, z) > spaces.norm(space, xx):
                problems.append("norm not monotone under majorization")
    if space.kind in spaces._PHI_KINDS:
        m = spaces.SpaceSpec("Marcinkiewicz", space.phi, space.alpha)
        ms = spaces.SpaceSpec("MarcinkiewiczStar", space.phi, space.alpha)
        if spaces.norm(ms, x) > spaces.norm(m, x):
            problems.append("M* norm exceeds M norm")
    if space.kind in banach:
        phi_e = space.fundamental_function()
        m = spaces.SpaceSpec("Marcinkiewicz", phi_e, space.alpha)
        if spaces.norm(m, x) > nx:
            problems.append("embedding into M_{phi_E} with constant 1 fails")
    return problems


def _hardy_triple(rng: random.Random, alpha: Ext):
    """(u, v, w) satisfying the hypotheses by construction."""
    v = rand_step(rng, alpha, max_pieces=6, signed=False)
    mode = rng.randrange(3)
    if mode == 0:
        u = v.scale(Fraction(rng.randint(0, 8), 8))
    elif mode == 1 and alpha == INF:
        # push mass to the right: u(t) = v(t - s) has smaller running integrals
        s = _frac(rng)
        cuts = [s] + [c + s for c in v.cuts]
        u = canonicalize(cuts, [_ZERO, *v.values], v.tail, INF)
    else:
        # cap v's running integral with a star's: averaged prefix
        u = v.scale(Fraction(rng.randint(0, 7), 8))
    w = rand_star(rng, alpha, max_pieces=5) if rng.random() < 0.8 else constant(
        _frac(rng), alpha
    )
    return u, v, w


def run_hardy_suite(cases: int, seed: int) -> SuiteResult:
    """Admissible triples must satisfy the product inequality; adversarial
    triples must be rejected with a verifiable witness."""
    rng = random.Random(seed)
    res = SuiteResult("hardy", cases, seed)
    for i in range(cases):
        alpha = INF if rng.random() < 0.6 else _ONE
        u, v, w = _hardy_triple(rng, alpha)
        problems = []
        try:
            if not majorize.hardy_check(u, v, w):
                problems.append("product inequality fails on an admissible triple")
        except HypothesisError as e:
            problems.append(f"admissible triple rejected: {e}")
        # adversarial: add mass to the head of u so cumulative domination breaks
        bump = _frac(rng)
        u_bad = v + canonicalize([bump], [bump], 0, alpha) if (
            alpha == INF or bump < 1
        ) else v + constant(bump, alpha)
        try:
            majorize.hardy_check(u_bad, v, w)
            problems.append("violating triple accepted")
        except HypothesisError as e:
            if e.witness is not None:
                t = e.witness
                if integrate(u_bad, 0, t) <= integrate(v, 0, t):
                    problems.append("hypothesis witness does not witness")
        if problems:
            res.failures.append({
                "case": i, "problems": problems, "u": u.to_json(),
                "v": v.to_json(), "w": w.to_json(),
            })
            if len(res.failures) >= 5:
                break
    return res


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "rearrange": run_rearrange_suite,
    "hlp": run_hlp_suite,
    "prop32": run_prop32_suite,
    "spaces": run_spaces_suite,
    "hardy": run_hardy_suite,
}


# -- shrinking ----------------------------------------------------------------


def _drop_piece(x: StepFunction, idx: int) -> Optional[StepFunction]:
    pieces = list(zip(x.cuts, x.values))
    if idx >= len(pieces):
        return None
    del pieces[idx]
    try:
        return canonicalize(
            [c for c, _ in pieces], [v for _, v in pieces], x.tail, x.alpha
        )
    except RearrCalcError:
        return None


def _simplify_rat(q: Fraction) -> list[Fraction]:
    outs = []
    for d in (1, 2, 4, 8):
        r = Fraction(round(q * d), d)
        if r != q:
            outs.append(r)
    return outs


def _rat_variants(x: StepFunction) -> list[StepFunction]:
    outs = []
    data = [list(x.cuts), list(x.values)]
    for which in (0, 1):
        for j in range(len(data[which])):
            for r in _simplify_rat(data[which][j]):
                cuts, values = list(x.cuts), list(x.values)
                (cuts if which == 0 else values)[j] = r
                try:
                    outs.append(canonicalize(cuts, values, x.tail, x.alpha))
                except RearrCalcError:
                    continue
    for r in _simplify_rat(x.tail):
        try:
            outs.append(canonicalize(x.cuts, x.values, r, x.alpha))
        except RearrCalcError:
            continue
    return outs


def shrink_case(case: dict, still_fails: Callable[[dict], bool],
                budget: int = 400) -> dict:
    """Greedy structural shrink of StepFunction/Fraction entries in a case."""
    case = dict(case)
    tries = 0
    improved = True
    while improved and tries < budget:
        improved = False
        for key, val in list(case.items()):
            if isinstance(val, StepFunction):
                candidates = [
                    s for i in range(len(val.cuts))
                    if (s := _drop_piece(val, i)) is not None
                ]
                candidates += _rat_variants(val)
            elif isinstance(val, Fraction):
                candidates = _simplify_rat(val)
            else:
                continue
            for cand in candidates:
                tries += 1
                if tries >= budget:
                    break
                trial = dict(case)
                trial[key] = cand
                try:
                    if still_fails(trial):
                        case = trial
                        improved = True
                        break
                except Exception:
                    continue
            if improved:
                break
    return case
