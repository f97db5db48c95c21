"""Exactly-computable symmetric function norms on step functions.

Five space kinds over a base interval [0, alpha):

* ``L1``            ||x|| = int |x|
* ``Linf``          ||x|| = ess sup |x| = x*(0+)
* ``L1plusLinf``    ||x|| = int_0^1 x*  (the usual K-functional at 1)
* ``Marcinkiewicz``       ||x|| = sup_t x**(t) * phi(t)
* ``MarcinkiewiczStar``   ||x|| = sup_t x*(t) * phi(t)   (quasinorm)

phi is a fundamental function: either an increasing concave piecewise-linear
function positive on (0, alpha), or the rational hyperbola t/(c + t), c > 0.
Everything is exact: suprema of x**(t)*phi(t) are computed per refined
segment, where the objective has the form A/t + B + C*t with A, C >= 0
(convex, so the supremum sits at segment endpoints or at the limits t -> 0+
and t -> alpha-); +inf is returned when the far limit diverges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ParseError, PreconditionError
from .rearrange import rearrangement
from .stepfn import (
    INF,
    Ext,
    PiecewiseLinearConcave,
    StepFunction,
    alpha_str,
    integrate,
    parse_alpha,
    parse_rat,
    rat,
    rat_str,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Hyperbolic:
    """The fundamental function phi(t) = t / (c + t) with rational c > 0."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))
        if self.c <= 0:
            raise PreconditionError(f"hyperbolic parameter must be positive, got {self.c}")

    def value_at(self, t) -> Fraction:
        t = rat(t)
        if t < 0:
            raise PreconditionError(f"t={t} < 0")
        return t / (self.c + t)

    def to_json(self) -> dict:
        return {"kind": "rational_hyperbolic", "c": rat_str(self.c)}


FundamentalFunction = Union[PiecewiseLinearConcave, Hyperbolic]


def phi_value(phi: FundamentalFunction, t) -> Fraction:
    return phi.value_at(t)


def phi_limit(phi: FundamentalFunction, alpha: Ext) -> Ext:
    """lim of phi at the right end of [0, alpha)."""
    if isinstance(phi, Hyperbolic):
        return phi.value_at(alpha) if alpha != INF else _ONE
    return phi.limit_value()


def phi_ratio_limit(phi: FundamentalFunction) -> Fraction:
    """lim_{t->inf} phi(t)/t (exists by concavity; 0 for the hyperbola)."""
    if isinstance(phi, Hyperbolic):
        return _ZERO
    return phi.final_slope


def _phi_jump0(phi: FundamentalFunction) -> Fraction:
    return _ZERO if isinstance(phi, Hyperbolic) else phi.jump0


def _validate_fundamental(phi: FundamentalFunction, alpha: Ext) -> None:
    if isinstance(phi, Hyperbolic):
        return
    if not isinstance(phi, PiecewiseLinearConcave):
        raise PreconditionError(f"not a fundamental function: {phi!r}")
    if phi.alpha != alpha:
        raise PreconditionError(
            f"fundamental function lives on [0,{alpha_str(phi.alpha)}), "
            f"space on [0,{alpha_str(alpha)})"
        )
    first_slope = phi.segment_slopes[0] if phi.cuts else phi.final_slope
    if phi.jump0 == 0 and first_slope <= 0:
        raise PreconditionError("fundamental function must be positive for t > 0")


_KINDS = ("L1", "Linf", "L1plusLinf", "Marcinkiewicz", "MarcinkiewiczStar")
_PHI_KINDS = ("Marcinkiewicz", "MarcinkiewiczStar")


@dataclass(frozen=True)
class SpaceSpec:
    """A named symmetric space on [0, alpha), with phi for the M-kinds."""

    kind: str
    phi: Optional[FundamentalFunction] = None
    alpha: Ext = INF

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise PreconditionError(
                f"unknown space kind {self.kind!r}; expected one of {', '.join(_KINDS)}"
            )
        object.__setattr__(self, "alpha", rat(1) if self.alpha == 1 else self.alpha)
        if self.alpha != INF and self.alpha != 1:
            raise PreconditionError("space domain endpoint must be 1 or inf")
        if self.kind in _PHI_KINDS:
            if self.phi is None:
                raise PreconditionError(f"kind {self.kind} needs a fundamental function")
            _validate_fundamental(self.phi, self.alpha)
        elif self.phi is not None:
            raise PreconditionError(f"kind {self.kind} does not take a fundamental function")

    # fundamental function of the space itself, as exact data
    def fundamental_function(self) -> FundamentalFunction:
        if self.kind in _PHI_KINDS:
            return self.phi
        if self.kind == "L1":
            return PiecewiseLinearConcave(self.alpha, (), (), _ONE)
        if self.kind == "Linf":
            return PiecewiseLinearConcave(self.alpha, (), (), _ZERO, jump0=_ONE)
        # L1plusLinf: min(t, 1), which on [0,1) is just t
        if self.alpha != INF:
            return PiecewiseLinearConcave(self.alpha, (), (), _ONE)
        return PiecewiseLinearConcave(INF, (_ONE,), (_ONE,), _ZERO)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "alpha": alpha_str(self.alpha)}
        if self.phi is not None:
            p = self.phi.to_json()
            if isinstance(self.phi, PiecewiseLinearConcave):
                p = {"kind": "piecewise_linear_concave", **p}
            out["phi"] = p
        return out

    @staticmethod
    def from_json(obj: dict) -> "SpaceSpec":
        if not isinstance(obj, dict):
            raise ParseError("space JSON must be an object")
        try:
            kind = obj["kind"]
            alpha = parse_alpha(obj.get("alpha", "inf"))
        except KeyError as e:
            raise ParseError(f"space JSON missing key {e.args[0]!r}") from None
        phi = None
        if "phi" in obj and obj["phi"] is not None:
            p = obj["phi"]
            if not isinstance(p, dict) or "kind" not in p:
                raise ParseError("phi JSON must be an object with a 'kind'")
            if p["kind"] == "rational_hyperbolic":
                try:
                    phi = Hyperbolic(parse_rat(p["c"]))
                except KeyError:
                    raise ParseError("rational_hyperbolic phi needs 'c'") from None
            elif p["kind"] == "piecewise_linear_concave":
                phi = PiecewiseLinearConcave.from_json(p)
            else:
                raise ParseError(f"unknown phi kind {p['kind']!r}")
        try:
            return SpaceSpec(kind, phi, alpha)
        except PreconditionError as e:
            raise ParseError(f"invalid space: {e}") from None


def _head_value(star: StepFunction) -> Fraction:
    """x*(0+) = ess sup |x|."""
    return star.values[0] if star.cuts else star.tail


def _norm_l1(x: StepFunction) -> Ext:
    if x.alpha == INF and x.tail != 0:
        return INF
    return integrate(abs(x), 0, x.alpha)


def _norm_marcinkiewicz_star(phi: FundamentalFunction, x: StepFunction) -> Ext:
    star = rearrangement(x).star
    best: Ext = _ZERO
    for s, e, v in star.pieces():
        if v == 0:
            continue
        # phi increases, so sup over [s, e) of v*phi is at the right end
        top = phi_limit(phi, x.alpha) if e == x.alpha else phi_value(phi, e)
        if top == INF:
            return INF
        best = max(best, v * top)
    return best


def _norm_marcinkiewicz(phi: FundamentalFunction, x: StepFunction) -> Ext:
    rr = rearrangement(x)
    big = rr.level_integral
    if isinstance(phi, Hyperbolic):
        # Phi(t)/(c+t) is a Moebius transform of an affine function on each
        # segment, hence monotone there: endpoints suffice.
        cands = [big.value_at(s) / (phi.c + s) for s in big.cuts]
        if x.alpha != INF:
            cands.append(big.value_at(x.alpha) / (phi.c + x.alpha))
        else:
            cands.append(rr.star_at_infinity)  # limit of Phi(t)/(c+t) as t->inf
        return max(cands, default=_ZERO)
    # piecewise-linear phi: on each refined segment the objective is
    # A/t + B + C*t with A, C >= 0: convex, so endpoints and limits suffice.
    cands: list[Ext] = [_phi_jump0(phi) * _head_value(rr.star)]  # t -> 0+
    cs = sorted({*big.cuts, *phi.cuts})
    cands += [big.value_at(s) * phi.value_at(s) / s for s in cs if s < x.alpha]
    if x.alpha != INF:
        cands.append(big.value_at(x.alpha) * phi.value_at(x.alpha))
    else:
        a_big, b_big = big.final_branch()
        a_phi, b_phi = phi.final_branch()
        if b_big > 0 and b_phi > 0:
            return INF
        cands.append(a_big * b_phi + b_big * a_phi)  # limit at infinity
    return max(cands)


def norm(space: SpaceSpec, x: StepFunction) -> Ext:
    """||x|| in the given space, exactly (INF when x is not in the space)."""
    if x.alpha != space.alpha:
        raise PreconditionError(
            f"x lives on [0,{alpha_str(x.alpha)}), space on [0,{alpha_str(space.alpha)})"
        )
    if space.kind == "L1":
        return _norm_l1(x)
    if space.kind == "Linf":
        return _head_value(rearrangement(x).star)
    if space.kind == "L1plusLinf":
        # int_0^1 x*; value_at(1) is the left limit when alpha = 1
        return rearrangement(x).level_integral.value_at(_ONE)
    if space.kind == "Marcinkiewicz":
        return _norm_marcinkiewicz(space.phi, x)
    return _norm_marcinkiewicz_star(space.phi, x)


def fundamental_eval(space: SpaceSpec, t) -> Fraction:
    """phi_E(t) = ||indicator of [0,t)|| for 0 < t < alpha."""
    t = rat(t)
    if not 0 < t < space.alpha:
        raise PreconditionError(f"need 0 < t < {alpha_str(space.alpha)}, got {t}")
    if space.kind == "L1":
        return t
    if space.kind == "Linf":
        return _ONE
    if space.kind == "L1plusLinf":
        return min(t, _ONE)
    return phi_value(space.phi, t)


def embeds_in_l1(space: SpaceSpec) -> bool:
    """Whether the space embeds in L1[0, b] for every finite b, i.e. whether
    lim_{t->inf} phi_E(t)/t > 0.  Defined for alpha = inf only."""
    if space.alpha != INF:
        raise PreconditionError("the embedding criterion is about [0, inf) spaces")
    if space.kind == "L1":
        return True
    if space.kind in ("Linf", "L1plusLinf"):
        return False
    return phi_ratio_limit(space.phi) > 0


embeds_in_L1 = embeds_in_l1


def mphi_a_member(phi: FundamentalFunction, x: StepFunction) -> bool:
    """Membership of x in the order-continuous part of the Marcinkiewicz
    space: x**(t)*phi(t) -> 0 both as t -> 0+ and t -> inf."""
    if x.alpha != INF:
        raise PreconditionError("membership test is about [0, inf) spaces")
    _validate_fundamental(phi, INF)
    rr = rearrangement(x)
    if isinstance(phi, Hyperbolic):
        zero_limit: Ext = _ZERO
        inf_limit: Ext = rr.star_at_infinity
    else:
        zero_limit = phi.jump0 * _head_value(rr.star)
        a_big, b_big = rr.level_integral.final_branch()
        a_phi, b_phi = phi.final_branch()
        if b_big > 0 and b_phi > 0:
            inf_limit = INF
        else:
            inf_limit = a_big * b_phi + b_big * a_phi
    return zero_limit == 0 and inf_limit == 0
