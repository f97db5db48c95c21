"""Sequence families and finite-evidence probes for order continuity.

A SequenceFamily is an indexed family n -> x_n of step functions sitting
below a base point in the majorization order.  probe_koc tracks norms of
x_n along an index list and reports whether the evidence is consistent with
the norms tending to 0 (K-order continuity at the base point); probe_lkm
tracks |x_n| -> |x| style convergence instead: exact in-measure distances
between rearrangements and between maximal functions, plus the norm gap.
Verdicts are three-valued (consistent_with_KOC, consistent_with_failure,
inconclusive) and never claim more than the finitely many indices tested.

All distances are exact: for rearrangements the set {|x_n* - x*| > delta}
is a finite union of intervals of a step function; for maximal functions
|x_n** - x**| restricted to a refined segment is |A/t + B|, and the
exceedance set is resolved by exact interval arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import PreconditionError
from .majorize import hlp_compare, is_decreasing_rearrangement
from .rearrange import level_integral, maximal_eval, rearrangement
from .spaces import SpaceSpec, norm
from .stepfn import (
    INF,
    Ext,
    StepFunction,
    block,
    box,
    constant,
    exceedance_measure,
    ext_str,
    rat,
    rat_str,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

DEFAULT_DELTAS = (Fraction(1), Fraction(1, 2), Fraction(1, 10))


@dataclass(frozen=True)
class SequenceFamily:
    """An indexed family n -> x_n with an optional base point it sits under."""

    name: str
    generator: Callable[[int], StepFunction]
    description: str
    base_point: Optional[StepFunction] = None

    def __call__(self, n: int) -> StepFunction:
        if not isinstance(n, int) or n < 1:
            raise PreconditionError(f"family index must be an integer >= 1, got {n!r}")
        return self.generator(n)


def flatten_head(x: StepFunction, n: int) -> StepFunction:
    """Average x* over [0, n): y_n = x**(n) on [0, n), x* beyond.

    x must be nonnegative on [0, inf).  The result is nonincreasing, equals
    x* past n, and satisfies y_n ≺ x (re-verified here on every call).
    """
    if x.alpha != INF:
        raise PreconditionError("head flattening is defined on [0, inf)")
    if not x.is_nonnegative():
        raise PreconditionError("head flattening needs a nonnegative x")
    if not isinstance(n, int) or n < 1:
        raise PreconditionError(f"head length must be an integer >= 1, got {n!r}")
    star = rearrangement(x).star
    y = block(maximal_eval(x, n), 0, n) + star.window(n, None)
    verdict = hlp_compare(y, x)
    if not verdict.holds:
        raise AssertionError(
            f"flattened head fails y ≺ x at t = {rat_str(verdict.witness)}"
        )
    return y


def builtin_family(name: str, x: Optional[StepFunction] = None, t_x=None) -> SequenceFamily:
    """Named families used by the replicate command and the probes.

    * ``remark45``:        x_n = (1/n) on [0, n), below x = indicator [0, 1)
    * ``example46_heads``: x_n = indicator of [0, 1/n), below x = 1 on [0, inf)
    * ``lemma43_y``:       y_n = (x*(t_x)/n) on [0, n*t_x)   (needs x, t_x)
    * ``lemma43_x``:       x_n = x**(n) on [0, n)            (needs x)
    * ``thm47_flatten``:   y_n = flatten_head(x, n)          (needs x)
    """
    if name == "remark45":
        base = box(1, 1)
        return SequenceFamily(
            name, lambda n: box(Fraction(1, n), n),
            "unit-mass boxes (1/n) on [0,n) under the indicator of [0,1)", base,
        )
    if name == "example46_heads":
        base = constant(1)
        return SequenceFamily(
            name, lambda n: box(1, Fraction(1, n)),
            "shrinking unit-height heads, indicator of [0,1/n)", base,
        )
    if name in ("lemma43_y", "lemma43_x", "thm47_flatten"):
        if x is None:
            raise PreconditionError(f"family {name} needs a base function x")
        if x.alpha != INF:
            raise PreconditionError(f"family {name} is defined on [0, inf)")
        star = rearrangement(x).star
        if name == "lemma43_y":
            if t_x is None:
                raise PreconditionError("family lemma43_y needs the point t_x")
            t_x = rat(t_x)
            if t_x <= 0:
                raise PreconditionError(f"need t_x > 0, got {t_x}")
            v = star(t_x)
            if v <= 0:
                raise PreconditionError(
                    f"family lemma43_y needs x*(t_x) > 0, got x*({rat_str(t_x)}) = 0"
                )
            return SequenceFamily(
                name, lambda n: box(v / n, n * t_x),
                f"boxes of height x*(t_x)/n on [0, n*t_x), t_x = {rat_str(t_x)}", x,
            )
        if name == "lemma43_x":
            return SequenceFamily(
                name, lambda n: box(maximal_eval(x, n), n),
                "boxes of height x**(n) on [0, n)", x,
            )
        return SequenceFamily(
            name, lambda n: flatten_head(x, n),
            "x* with its head averaged over [0, n)", x,
        )
    raise PreconditionError(
        "unknown family name; expected remark45, example46_heads, "
        "lemma43_y, lemma43_x, or thm47_flatten"
    )


# -- exact in-measure distances ----------------------------------------------


def measure_distance(f: StepFunction, g: StepFunction, delta) -> Ext:
    """mu{ t : |f(t) - g(t)| > delta }, exactly; may be INF."""
    delta = rat(delta)
    if delta <= 0:
        raise PreconditionError(f"need delta > 0, got {delta}")
    return exceedance_measure(f - g, delta)


def _hyperbolic_exceedance(A: Fraction, B: Fraction, delta: Fraction,
                           lo: Fraction, hi: Ext) -> Ext:
    """mu{ t in (lo, hi) : |A/t + B| > delta } for 0 <= lo < hi <= inf."""
    if A == 0:
        if abs(B) > delta:
            return INF if hi == INF else hi - lo
        return _ZERO
    # h(t) = A/t + B is strictly monotone on (0, inf): decreasing to B for
    # A > 0 (from +inf), increasing to B for A < 0 (from -inf).
    intervals: list[tuple[Fraction, Ext]] = []
    if A > 0:
        if B >= delta:
            intervals.append((_ZERO, INF))  # h > B >= delta everywhere
        else:
            intervals.append((_ZERO, A / (delta - B)))  # h > delta before the crossing
        if B < -delta:
            intervals.append((A / (-delta - B), INF))  # h < -delta past the crossing
    else:
        if B <= -delta:
            intervals.append((_ZERO, INF))
        else:
            intervals.append((_ZERO, A / (-delta - B)))
        if B > delta:
            intervals.append((A / (delta - B), INF))
    total: Fraction = _ZERO
    for a, b in intervals:
        a2 = max(a, lo)
        b2 = b if hi == INF else (min(b, hi) if b != INF else hi)
        if b2 == INF:
            if a2 != INF:
                return INF
            continue
        if b2 > a2:
            total += b2 - a2
    return total


def maximal_distance(x: StepFunction, y: StepFunction, delta) -> Ext:
    """mu{ t in (0, alpha) : |x**(t) - y**(t)| > delta }, exactly."""
    delta = rat(delta)
    if delta <= 0:
        raise PreconditionError(f"need delta > 0, got {delta}")
    if x.alpha != y.alpha:
        raise PreconditionError("operands live on different domains")
    fx, fy = level_integral(x), level_integral(y)
    cs = sorted({*fx.cuts, *fy.cuts})
    ends: list[Ext] = [c for c in cs if c > 0]
    ends.append(fx.alpha)
    total: Ext = _ZERO
    lo = _ZERO
    for hi in ends:
        probe = (lo + hi) / 2 if hi != INF else lo + 1
        # on (lo, hi) both integrals are affine: difference = A + B*t,
        # so x** - y** = A/t + B there
        def branch(f):
            v1 = f.value_at(probe)
            t2 = (probe + hi) / 2 if hi != INF else probe + 1
            v2 = f.value_at(t2)
            slope = (v2 - v1) / (t2 - probe)
            return v1 - slope * probe, slope
        (ax, bx), (ay, by) = branch(fx), branch(fy)
        piece = _hyperbolic_exceedance(ax - ay, bx - by, delta, lo, hi)
        if piece == INF:
            return INF
        total += piece
        lo = hi
    return total


# -- probes -------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeRecord:
    """Measurements at one index n."""

    n: int
    norm: Ext
    hlp_holds: bool
    star_distances: tuple[tuple[Fraction, Ext], ...]
    maximal_distances: Optional[tuple[tuple[Fraction, Ext], ...]] = None
    norm_gap: Optional[Ext] = None

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "norm": ext_str(self.norm),
            "hlp_holds": self.hlp_holds,
            "star_distance": {rat_str(d): ext_str(m) for d, m in self.star_distances},
        }
        if self.maximal_distances is not None:
            out["maximal_distance"] = {
                rat_str(d): ext_str(m) for d, m in self.maximal_distances
            }
        if self.norm_gap is not None:
            out["norm_gap"] = ext_str(self.norm_gap)
        return out


VERDICTS = ("consistent_with_KOC", "consistent_with_failure", "inconclusive")


@dataclass(frozen=True)
class ProbeReport:
    """Finite evidence from a probe run; serializes to JSON, table and CSV."""

    probe: str
    family: str
    space: SpaceSpec
    n_list: tuple[int, ...]
    records: tuple[ProbeRecord, ...]
    verdict: str
    notes: str
    tolerance: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {
            "probe": self.probe,
            "family": self.family,
            "space": self.space.to_json(),
            "n": list(self.n_list),
            "records": [r.to_json() for r in self.records],
            "verdict": self.verdict,
            "notes": self.notes,
        }
        if self.tolerance is not None:
            out["tolerance"] = rat_str(self.tolerance)
        return out

    def _rows(self) -> tuple[list[str], list[list[str]]]:
        deltas = [d for d, _ in self.records[0].star_distances] if self.records else []
        header = ["n", "norm", "hlp"]
        header += [f"d*[{rat_str(d)}]" for d in deltas]
        if self.records and self.records[0].maximal_distances is not None:
            header += [f"d**[{rat_str(d)}]" for d in deltas]
        if self.records and self.records[0].norm_gap is not None:
            header.append("norm_gap")
        rows = []
        for r in self.records:
            row = [str(r.n), ext_str(r.norm), "yes" if r.hlp_holds else "no"]
            row += [ext_str(m) for _, m in r.star_distances]
            if r.maximal_distances is not None:
                row += [ext_str(m) for _, m in r.maximal_distances]
            if r.norm_gap is not None:
                row.append(ext_str(r.norm_gap))
            rows.append(row)
        return header, rows

    def to_table(self) -> str:
        header, rows = self._rows()
        widths = [
            max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
            for i in range(len(header))
        ]
        fmt = lambda row: "  ".join(c.rjust(w) for c, w in zip(row, widths))
        lines = [
            f"probe={self.probe} family={self.family} space={self.space.kind} "
            f"verdict={self.verdict}",
            fmt(header),
            fmt(["-" * w for w in widths]),
        ]
        lines += [fmt(r) for r in rows]
        lines.append(f"notes: {self.notes}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        header, rows = self._rows()
        out = [",".join(header)]
        out += [",".join(r) for r in rows]
        return "\n".join(out)


def _norm_gap(a: Ext, b: Ext) -> Ext:
    if a == INF and b == INF:
        return _ZERO
    if a == INF or b == INF:
        return INF
    return abs(a - b)


def _check_family_below(x: StepFunction, family: SequenceFamily, n: int,
                        x_n: StepFunction) -> None:
    verdict = hlp_compare(x_n, x)
    if not verdict.holds:
        raise PreconditionError(
            f"family {family.name} leaves the order interval at n = {n}: "
            f"int_0^t x_n* > int_0^t x* at t = {rat_str(verdict.witness)}"
        )


def probe_koc(x: StepFunction, family: SequenceFamily, space: SpaceSpec,
              n_list: Sequence[int], tolerance, deltas=DEFAULT_DELTAS) -> ProbeReport:
    """Track ||x_n|| along n_list for a family with every x_n ≺ x.

    Verdict: consistent_with_KOC when the norm sequence has a nonincreasing
    tail and ends below tolerance; consistent_with_failure when all norms
    stay >= tolerance (min reported); inconclusive otherwise.  Distances of
    x_n* to 0 at each delta are recorded as the in-measure diagnostic.
    """
    tolerance = rat(tolerance)
    if tolerance <= 0:
        raise PreconditionError(f"need tolerance > 0, got {tolerance}")
    n_list = _validated_n_list(n_list)
    deltas = tuple(rat(d) for d in deltas)
    zero = constant(0, x.alpha)
    records = []
    for n in n_list:
        x_n = family(n)
        _check_family_below(x, family, n, x_n)
        star_n = rearrangement(x_n).star
        records.append(ProbeRecord(
            n=n,
            norm=norm(space, x_n),
            hlp_holds=True,
            star_distances=tuple(
                (d, measure_distance(star_n, zero, d)) for d in deltas
            ),
        ))
    norms = [r.norm for r in records]
    tail_start = len(norms) - 1
    while tail_start > 0 and norms[tail_start - 1] >= norms[tail_start]:
        tail_start -= 1
    last = norms[-1]
    low = min(norms)
    if last < tolerance and tail_start < len(norms) - 1:
        verdict = "consistent_with_KOC"
        notes = (
            f"norms nonincreasing from n={n_list[tail_start]} and final norm "
            f"{ext_str(last)} < tolerance {rat_str(tolerance)}"
        )
    elif low >= tolerance:
        verdict = "consistent_with_failure"
        notes = f"all norms >= {ext_str(low)} (lower bound over tested n)"
    else:
        verdict = "inconclusive"
        if tail_start >= len(norms) - 1:
            notes = "no nonincreasing norm tail"
        else:
            notes = (
                f"final norm {ext_str(last)} not below tolerance "
                f"{rat_str(tolerance)}"
            )
    notes += f"; x*(inf) = {rat_str(rearrangement(x).star_at_infinity)}"
    final_zero = all(m == 0 for _, m in records[-1].star_distances)
    notes += (
        "; in-measure diagnostic agrees (final x_n* within every delta of 0)"
        if final_zero
        else "; in-measure diagnostic: final x_n* not within every delta of 0"
    )
    return ProbeReport(
        probe="koc", family=family.name, space=space, n_list=n_list,
        records=tuple(records), verdict=verdict, notes=notes, tolerance=tolerance,
    )


def probe_lkm(x: StepFunction, family: SequenceFamily, space: SpaceSpec,
              n_list: Sequence[int], deltas=DEFAULT_DELTAS) -> ProbeReport:
    """Track x_n -> x evidence: exact star/maximal in-measure distances and
    the norm gap |  ||x_n|| - ||x||  | along n_list, for a family below x.

    Verdict: consistent_with_KOC when every recorded distance (star and
    maximal, each delta) is 0 at the final n; consistent_with_failure when
    some delta's distances over the second half of n_list are bounded below
    by a positive rational (reported); inconclusive otherwise.
    """
    n_list = _validated_n_list(n_list)
    deltas = tuple(rat(d) for d in deltas)
    if x.alpha == INF and rearrangement(x).star_at_infinity != 0:
        raise PreconditionError("probe needs x*(inf) = 0 so distances can vanish")
    norm_x = norm(space, x)
    star_x = rearrangement(x).star
    records = []
    for n in n_list:
        x_n = family(n)
        _check_family_below(x, family, n, x_n)
        star_n = rearrangement(x_n).star
        records.append(ProbeRecord(
            n=n,
            norm=norm(space, x_n),
            hlp_holds=True,
            star_distances=tuple(
                (d, measure_distance(star_n, star_x, d)) for d in deltas
            ),
            maximal_distances=tuple(
                (d, maximal_distance(x_n, x, d)) for d in deltas
            ),
            norm_gap=_norm_gap(norm(space, x_n), norm_x),
        ))
    final = records[-1]
    all_final_zero = all(m == 0 for _, m in final.star_distances) and all(
        m == 0 for _, m in final.maximal_distances
    )
    # lower bounds per delta over the later half of the index list, so a
    # degenerate early entry (x_1 = x gives distance 0) cannot mask a trend
    half = records[len(records) // 2:]
    positive_bounds: list[Ext] = []
    for i in range(len(deltas)):
        for pick in (
            lambda r: r.star_distances[i][1],
            lambda r: r.maximal_distances[i][1],
        ):
            lo = min(pick(r) for r in half)
            if lo > 0:
                positive_bounds.append(lo)
    if all_final_zero:
        verdict = "consistent_with_KOC"
        notes = "all star/maximal distances vanished at the final n"
    elif positive_bounds:
        verdict = "consistent_with_failure"
        notes = (
            f"some distance bounded below by {ext_str(min(positive_bounds))} "
            "over the later half of n"
        )
    else:
        verdict = "inconclusive"
        notes = "distances neither vanish at the final n nor stay bounded below"
    notes += f"; ||x|| = {ext_str(norm_x)}"
    return ProbeReport(
        probe="lkm", family=family.name, space=space, n_list=n_list,
        records=tuple(records), verdict=verdict, notes=notes, tolerance=None,
    )


def _validated_n_list(n_list: Sequence[int]) -> tuple[int, ...]:
    ns = tuple(n_list)
    if not ns:
        raise PreconditionError("n list must be nonempty")
    for n in ns:
        if not isinstance(n, int) or n < 1:
            raise PreconditionError(f"indices must be integers >= 1, got {n!r}")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise PreconditionError("indices must be strictly increasing")
    return ns
