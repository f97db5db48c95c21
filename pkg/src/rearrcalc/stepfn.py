"""Exact step-function algebra over the rationals.

Functions live on a base interval [0, alpha) with alpha = 1 or alpha = +inf.
A step function is finitely piecewise constant with rational breakpoints and
values, identified up to a.e. equality; the canonical representative uses
right-open pieces [t_{i-1}, t_i), merges neighbouring pieces of equal value,
and stores the eventual value separately as ``tail``.  All arithmetic is
exact: scalars are ``fractions.Fraction``, and the single non-rational value
in the whole library is the sentinel ``INF`` returned by measures, norms and
integrals that diverge.  Floats are rejected everywhere else on purpose; feed
``Fraction``, ints, or "p/q" strings.

The module also provides :class:`PiecewiseLinearConcave` for the increasing
concave envelopes that arise as running integrals of decreasing step
functions, with the same canonical-representative discipline (strictly
decreasing segment slopes, explicit final slope, explicit right-limit at 0).
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Union

from .errors import (
    DomainMismatchError,
    InfiniteIntegralError,
    ParseError,
    PreconditionError,
)

INF = float("inf")

#: A finite rational or +infinity.
Ext = Union[Fraction, float]

_ZERO = Fraction(0)
_ONE = Fraction(1)

_RAT_RE = re.compile(r"^-?\d+(/\d+)?$")


def rat(x) -> Fraction:
    """Coerce x to an exact Fraction; floats are rejected, by design."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise ParseError(f"not an exact rational: {x!r} (floats are not accepted)")


def parse_rat(s: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction."""
    if not isinstance(s, str):
        raise ParseError(f"rational literal must be a string, got {s!r}")
    s = s.strip()
    if not _RAT_RE.match(s):
        raise ParseError(f"bad rational literal: {s!r} (want 'p' or 'p/q')")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"bad rational literal: {s!r} (zero denominator)") from None


def rat_str(q: Fraction) -> str:
    """Serialize a Fraction as "p/q" (always with the slash, e.g. "3/1")."""
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


def ext_str(v: Ext) -> str:
    return "inf" if v == INF else rat_str(v)


def parse_ext(s: str) -> Ext:
    s = s.strip()
    return INF if s == "inf" else parse_rat(s)


def parse_alpha(s: str) -> Ext:
    if s == "inf":
        return INF
    if s == "1":
        return _ONE
    raise ParseError(f"bad domain endpoint: {s!r} (want '1' or 'inf')")


def alpha_str(alpha: Ext) -> str:
    return "inf" if alpha == INF else "1"


def _coerce_alpha(alpha) -> Ext:
    if alpha == INF:
        return INF
    if alpha == 1:
        return _ONE
    raise PreconditionError(f"domain endpoint must be 1 or inf, got {alpha!r}")


def _require_same_domain(f, g) -> None:
    if f.alpha != g.alpha:
        raise DomainMismatchError(
            f"operands live on different domains: [0,{alpha_str(f.alpha)}) "
            f"vs [0,{alpha_str(g.alpha)})"
        )


@dataclass(frozen=True)
class StepFunction:
    """Canonical finitely-piecewise-constant function on [0, alpha).

    ``values[i]`` is taken on [cuts[i-1], cuts[i]) (with cuts[-1] meaning 0),
    and ``tail`` on [cuts[-1], alpha).  Canonical form: cuts strictly
    increasing inside (0, alpha), neighbouring values distinct, and the last
    listed value distinct from the tail.  Construct arbitrary raw piece data
    through :func:`canonicalize`, which merges for you.
    """

    alpha: Ext
    cuts: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    tail: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", _coerce_alpha(self.alpha))
        object.__setattr__(self, "cuts", tuple(rat(c) for c in self.cuts))
        object.__setattr__(self, "values", tuple(rat(v) for v in self.values))
        object.__setattr__(self, "tail", rat(self.tail))
        if len(self.cuts) != len(self.values):
            raise PreconditionError(
                f"{len(self.cuts)} cuts need {len(self.cuts)} values, "
                f"got {len(self.values)}"
            )
        prev = _ZERO
        for c in self.cuts:
            if c <= prev:
                raise PreconditionError(f"cuts not strictly increasing at {c}")
            prev = c
        if self.alpha != INF and self.cuts and self.cuts[-1] >= self.alpha:
            raise PreconditionError(
                f"cut {self.cuts[-1]} outside [0,{alpha_str(self.alpha)})"
            )
        for a, b in zip(self.values, self.values[1:]):
            if a == b:
                raise PreconditionError(
                    f"not canonical: equal neighbouring values {a} (use canonicalize)"
                )
        if self.values and self.values[-1] == self.tail:
            raise PreconditionError(
                f"not canonical: last value equals tail {self.tail} (use canonicalize)"
            )

    # -- basic queries ----------------------------------------------------

    @property
    def support_bound(self) -> Fraction:
        """Least T with f constant (== tail) on [T, alpha)."""
        return self.cuts[-1] if self.cuts else _ZERO

    def pieces(self) -> Iterator[tuple[Fraction, Ext, Fraction]]:
        """Yield (start, end, value) triples covering [0, alpha); last end is alpha."""
        start = _ZERO
        for c, v in zip(self.cuts, self.values):
            yield start, c, v
            start = c
        yield start, self.alpha, self.tail

    def __call__(self, t) -> Fraction:
        t = rat(t)
        if t < 0 or t >= self.alpha:
            raise PreconditionError(f"t={t} outside [0,{alpha_str(self.alpha)})")
        i = bisect_right(self.cuts, t)
        return self.values[i] if i < len(self.cuts) else self.tail

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values) and self.tail >= 0

    # -- pointwise algebra -------------------------------------------------

    def _zip_with(self, other: "StepFunction", op) -> "StepFunction":
        _require_same_domain(self, other)
        cs = sorted({*self.cuts, *other.cuts})
        vals = [op(self(s), other(s)) for s in (_ZERO, *cs)]
        return canonicalize(cs, vals[:-1], vals[-1], self.alpha)

    def _map(self, op) -> "StepFunction":
        return canonicalize(
            self.cuts, [op(v) for v in self.values], op(self.tail), self.alpha
        )

    def __add__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._zip_with(other, lambda a, b: a + b)

    def __sub__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._zip_with(other, lambda a, b: a - b)

    def __neg__(self):
        return self._map(lambda v: -v)

    def __abs__(self):
        return self._map(abs)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return self._zip_with(other, lambda a, b: a * b)
        return self._map(lambda v: v * rat(other))

    __rmul__ = __mul__

    def scale(self, c) -> "StepFunction":
        return self * rat(c)

    def positive_part(self) -> "StepFunction":
        return self._map(lambda v: max(v, _ZERO))

    def window(self, a, b=None) -> "StepFunction":
        """Return f * indicator of [a, b); b=None means b=alpha."""
        a = rat(a)
        if a < 0:
            raise PreconditionError(f"window start {a} < 0")
        hi: Ext = self.alpha if b is None else (INF if b == INF else rat(b))
        if hi != INF and hi > self.alpha:
            raise PreconditionError("window end beyond the domain")
        if hi != INF and hi <= a:
            return constant(0, self.alpha)
        extra = {a} | ({hi} if hi != INF and hi < self.alpha else set())
        cs = sorted({*self.cuts, *extra} - {_ZERO})
        cs = [c for c in cs if c < self.alpha]
        vals = [
            self(s) if (s >= a and (hi == INF or s < hi)) else _ZERO
            for s in (_ZERO, *cs)
        ]
        return canonicalize(cs, vals[:-1], vals[-1], self.alpha)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "alpha": alpha_str(self.alpha),
            "breakpoints": [rat_str(c) for c in self.cuts],
            "values": [rat_str(v) for v in self.values],
            "tail": rat_str(self.tail),
        }

    @staticmethod
    def from_json(obj: dict) -> "StepFunction":
        if not isinstance(obj, dict):
            raise ParseError(f"step function JSON must be an object, got {type(obj).__name__}")
        try:
            alpha = parse_alpha(obj["alpha"])
            cuts = [parse_rat(c) for c in obj["breakpoints"]]
            values = [parse_rat(v) for v in obj["values"]]
            tail = parse_rat(obj["tail"])
        except KeyError as e:
            raise ParseError(f"step function JSON missing key {e.args[0]!r}") from None
        except TypeError as e:
            raise ParseError(f"malformed step function JSON: {e}") from None
        try:
            return canonicalize(cuts, values, tail, alpha)
        except PreconditionError as e:
            raise ParseError(f"invalid step function: {e}") from None


def canonicalize(breakpoints, values, tail, alpha=INF) -> StepFunction:
    """Build the canonical StepFunction from raw piece data.

    Piece i takes values[i] on [breakpoints[i-1], breakpoints[i]), and tail
    holds from the last breakpoint on.  Equal neighbouring pieces are merged;
    breakpoints must be strictly increasing inside (0, alpha).
    """
    alpha = _coerce_alpha(alpha)
    ts = [rat(t) for t in breakpoints]
    vs = [rat(v) for v in values] + [rat(tail)]
    if len(ts) != len(vs) - 1:
        raise PreconditionError(
            f"{len(ts)} breakpoints need {len(ts)} values, got {len(vs) - 1}"
        )
    prev = _ZERO
    for t in ts:
        if t <= prev:
            raise PreconditionError(f"breakpoints not strictly increasing at {t}")
        prev = t
    if alpha != INF and ts and ts[-1] >= alpha:
        raise PreconditionError(f"breakpoint {ts[-1]} outside [0,{alpha_str(alpha)})")
    cuts: list[Fraction] = []
    vals: list[Fraction] = []
    cur = vs[0]
    for t, nxt in zip(ts, vs[1:]):
        if nxt != cur:
            cuts.append(t)
            vals.append(cur)
            cur = nxt
    return StepFunction(alpha, tuple(cuts), tuple(vals), cur)


def constant(c, alpha=INF) -> StepFunction:
    return StepFunction(alpha, (), (), rat(c))


def box(height, width, alpha=INF) -> StepFunction:
    """height * indicator of [0, width)."""
    width = rat(width)
    if width <= 0:
        raise PreconditionError(f"box width must be positive, got {width}")
    alpha = _coerce_alpha(alpha)
    if width > alpha:
        raise PreconditionError(f"box width {width} beyond the domain")
    if width == alpha:
        return constant(height, alpha)
    return canonicalize([width], [height], 0, alpha)


def block(height, a, b, alpha=INF) -> StepFunction:
    """height * indicator of [a, b); b may be INF when alpha is INF."""
    return constant(height, alpha).window(a, b)


def evaluate(f: StepFunction, t) -> Fraction:
    return f(t)


def combine(f: StepFunction, g=None, mode="add", scalar=None) -> StepFunction:
    """Pointwise combination dispatcher.

    Binary modes (need g): add, sub, mul, min, max.  Unary modes: scale
    (needs scalar), abs, neg, pos_part (alias pos).
    """
    binary = {
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
        "mul": lambda a, b: a * b,
        "min": min,
        "max": max,
    }
    if mode in binary:
        if g is None:
            raise PreconditionError(f"combine mode {mode!r} needs a second operand")
        return f._zip_with(g, binary[mode])
    if mode == "scale":
        if scalar is None:
            raise PreconditionError("combine mode 'scale' needs scalar=")
        return f.scale(scalar)
    if mode == "abs":
        return abs(f)
    if mode == "neg":
        return -f
    if mode in ("pos_part", "pos"):
        return f.positive_part()
    raise PreconditionError(f"unknown combine mode {mode!r}")


def integrate(f: StepFunction, a, b) -> Fraction:
    """Exact integral of f over [a, b] within [0, alpha].

    b may be INF (alpha=INF only); diverging integrals raise
    InfiniteIntegralError rather than returning a signed infinity.
    """
    a = rat(a)
    hi: Ext = INF if b == INF else rat(b)
    if a < 0 or hi < a:
        raise PreconditionError(f"bad integration bounds [{a}, {ext_str(hi)}]")
    if hi != INF and hi > f.alpha:
        raise PreconditionError("integration beyond the domain")
    if hi == INF:
        if f.alpha != INF:
            raise PreconditionError("integration beyond the domain")
        if f.tail != 0:
            raise InfiniteIntegralError(
                f"integral diverges: tail value {rat_str(f.tail)} on an infinite interval"
            )
        hi = max(a, f.support_bound)
    total = _ZERO
    for s, e, v in f.pieces():
        if v == 0:
            continue
        lo = max(s, a)
        up = hi if e == INF else min(e, hi)
        if up > lo:
            total += v * (up - lo)
    return total


def exceedance_measure(f: StepFunction, lam) -> Ext:
    """mu{ t in [0, alpha) : |f(t)| > lam }, exactly; may be INF."""
    lam = rat(lam)
    if lam < 0:
        raise PreconditionError(f"level must be nonnegative, got {lam}")
    total = _ZERO
    for s, e, v in f.pieces():
        if abs(v) > lam:
            if e == INF:
                return INF
            total += e - s
    return total


# -- increasing concave piecewise-linear functions --------------------------


@dataclass(frozen=True)
class PiecewiseLinearConcave:
    """Nondecreasing concave piecewise-linear function on [0, alpha).

    Value 0 at t=0 with right-limit ``jump0`` >= 0, interior nodes at
    ``cuts`` with values ``node_values``, and slope ``final_slope`` from the
    last node on.  Canonical form: segment slopes strictly decreasing left to
    right (ending with final_slope), all nonnegative.  Merge raw node data
    with :func:`plc_from_nodes`.
    """

    alpha: Ext
    cuts: tuple[Fraction, ...]
    node_values: tuple[Fraction, ...]
    final_slope: Fraction
    jump0: Fraction = _ZERO

    def __post_init__(self):
        object.__setattr__(self, "alpha", _coerce_alpha(self.alpha))
        object.__setattr__(self, "cuts", tuple(rat(c) for c in self.cuts))
        object.__setattr__(self, "node_values", tuple(rat(v) for v in self.node_values))
        object.__setattr__(self, "final_slope", rat(self.final_slope))
        object.__setattr__(self, "jump0", rat(self.jump0))
        if len(self.cuts) != len(self.node_values):
            raise PreconditionError("cuts and node_values must have equal length")
        if self.jump0 < 0:
            raise PreconditionError(f"jump at 0 must be nonnegative, got {self.jump0}")
        prev = _ZERO
        for c in self.cuts:
            if c <= prev:
                raise PreconditionError(f"cuts not strictly increasing at {c}")
            prev = c
        if self.alpha != INF and self.cuts and self.cuts[-1] >= self.alpha:
            raise PreconditionError(f"cut {self.cuts[-1]} outside the domain")
        slopes = list(self.segment_slopes) + [self.final_slope]
        for m in slopes:
            if m < 0:
                raise PreconditionError(f"negative slope {m}: not nondecreasing")
        for a, b in zip(slopes, slopes[1:]):
            if a <= b:
                raise PreconditionError(
                    f"slopes not strictly decreasing ({a} then {b}): "
                    "not concave-canonical (use plc_from_nodes)"
                )

    @cached_property
    def segment_slopes(self) -> tuple[Fraction, ...]:
        """Slope on (cuts[j-1], cuts[j]] for each j."""
        out = []
        ps, pv = _ZERO, self.jump0
        for s, v in zip(self.cuts, self.node_values):
            out.append((v - pv) / (s - ps))
            ps, pv = s, v
        return tuple(out)

    def value_at(self, t) -> Fraction:
        """Exact value at t; t=alpha allowed for alpha=1 (the left limit)."""
        t = rat(t)
        if t < 0 or (self.alpha != INF and t > self.alpha):
            raise PreconditionError(f"t={t} outside [0,{alpha_str(self.alpha)}]")
        if t == 0:
            return _ZERO
        i = bisect_right(self.cuts, t)
        if i > 0 and self.cuts[i - 1] == t:
            return self.node_values[i - 1]
        bs, bv = (_ZERO, self.jump0) if i == 0 else (self.cuts[i - 1], self.node_values[i - 1])
        slope = self.segment_slopes[i] if i < len(self.cuts) else self.final_slope
        return bv + slope * (t - bs)

    def final_branch(self) -> tuple[Fraction, Fraction]:
        """(intercept, slope) of the affine branch valid from the last cut on."""
        if not self.cuts:
            return self.jump0, self.final_slope
        s, v = self.cuts[-1], self.node_values[-1]
        return v - self.final_slope * s, self.final_slope

    def limit_value(self) -> Ext:
        """Value as t -> alpha-; INF when the final slope is positive on [0,inf)."""
        if self.alpha != INF:
            return self.value_at(self.alpha)
        if self.final_slope > 0:
            return INF
        return self.node_values[-1] if self.cuts else self.jump0

    def to_json(self) -> dict:
        return {
            "alpha": alpha_str(self.alpha),
            "breakpoints": [rat_str(c) for c in self.cuts],
            "node_values": [rat_str(v) for v in self.node_values],
            "final_slope": rat_str(self.final_slope),
            "jump0": rat_str(self.jump0),
        }

    @staticmethod
    def from_json(obj: dict) -> "PiecewiseLinearConcave":
        if not isinstance(obj, dict):
            raise ParseError("piecewise-linear JSON must be an object")
        try:
            return plc_from_nodes(
                [parse_rat(c) for c in obj["breakpoints"]],
                [parse_rat(v) for v in obj["node_values"]],
                parse_rat(obj["final_slope"]),
                parse_rat(obj.get("jump0", "0/1")),
                parse_alpha(obj["alpha"]),
            )
        except KeyError as e:
            raise ParseError(f"piecewise-linear JSON missing key {e.args[0]!r}") from None
        except PreconditionError as e:
            raise ParseError(f"invalid piecewise-linear function: {e}") from None


def plc_from_nodes(cuts, node_values, final_slope, jump0=0, alpha=INF) -> PiecewiseLinearConcave:
    """Build a canonical PiecewiseLinearConcave, merging collinear nodes."""
    cuts = [rat(c) for c in cuts]
    node_values = [rat(v) for v in node_values]
    final_slope = rat(final_slope)
    jump0 = rat(jump0)
    pts = list(zip(cuts, node_values))
    kept: list[tuple[Fraction, Fraction]] = []
    ps, pv = _ZERO, jump0
    for j, (s, v) in enumerate(pts):
        if s <= ps:
            raise PreconditionError(f"cuts not strictly increasing at {s}")
        slope_in = (v - pv) / (s - ps)
        if j + 1 < len(pts):
            ns, nv = pts[j + 1]
            slope_out = (nv - v) / (ns - s)
        else:
            slope_out = final_slope
        if slope_in != slope_out:
            kept.append((s, v))
        ps, pv = s, v
    return PiecewiseLinearConcave(
        alpha,
        tuple(s for s, _ in kept),
        tuple(v for _, v in kept),
        final_slope,
        jump0,
    )
