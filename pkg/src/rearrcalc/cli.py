"""Command-line interface.

Every operation of the library is reachable here.  Output is deterministic:
identical arguments (and seed) produce byte-identical bytes on stdout, in
``json`` (default), ``table``, or ``csv`` form.  Exit status: 0 on success
(including probes, whose verdict is part of the payload), 2 on parse errors,
3 on precondition violations, 4 when a property suite finds a counterexample
(the minimized counterexample is part of the JSON payload).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import gen
from .errors import ParseError, RearrCalcError
from .experiments import (
    DEFAULT_DELTAS,
    builtin_family,
    flatten_head,
    probe_koc,
    probe_lkm,
)
from .majorize import (
    family_contains,
    hlp_compare,
    majorant_pair,
    sample_family_member,
)
from .rearrange import maximal_eval, rearrangement
from .spaces import Hyperbolic, SpaceSpec, embeds_in_l1, fundamental_eval, norm
from .stepfn import (
    INF,
    PiecewiseLinearConcave,
    StepFunction,
    box,
    constant,
    canonicalize,
    ext_str,
    parse_rat,
    rat_str,
)

_EXIT_OK = 0
_EXIT_PARSE = 2
_EXIT_PRECONDITION = 3
_EXIT_PROPERTY = 4


def _load_json(source: str):
    """Load JSON from an inline string, a file path, or '-' (stdin)."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        try:
            text = Path(source).read_text()
        except OSError as e:
            raise ParseError(f"cannot read input {source!r}: {e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"input is not valid JSON: {e}") from None


def _load_step(source: str) -> StepFunction:
    return StepFunction.from_json(_load_json(source))


def _load_space(source: str) -> SpaceSpec:
    return SpaceSpec.from_json(_load_json(source))


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if lo < 1 or hi < lo:
                raise ValueError
            return tuple(range(lo, hi + 1))
        if "," in text:
            ns = tuple(int(p) for p in text.split(","))
            if any(n < 1 for n in ns):
                raise ValueError
            return ns
        n = int(text)
        if n < 1:
            raise ValueError
        return (n,)
    except ValueError:
        raise ParseError(
            f"bad --n value {text!r}: want N, A..B, or a comma list of integers >= 1"
        ) from None


def _parse_deltas(text: str) -> tuple[Fraction, ...]:
    out = tuple(parse_rat(p) for p in text.split(","))
    if any(d <= 0 for d in out):
        raise ParseError(f"deltas must be positive, got {text!r}")
    return out


def _resolve_seed(args) -> int:
    env = os.environ.get("REARRCALC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(
                f"REARRCALC_SEED must be an integer, got {env!r}"
            ) from None
    return args.seed


# -- output rendering ---------------------------------------------------------


def _flatten_payload(prefix: str, obj, out: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten_payload(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten_payload(f"{prefix}[{i}]", v, out)
    else:
        if isinstance(obj, bool):
            text = "true" if obj else "false"
        elif obj is None:
            text = "null"
        else:
            text = str(obj)
        out.append((prefix, text))


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True)
    rows: list[tuple[str, str]] = []
    _flatten_payload("", payload, rows)
    if fmt == "csv":
        return "\n".join(f"{k},{v}" for k, v in rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _emit(args, payload: dict, table_text: str | None = None) -> int:
    if args.format == "json" or table_text is None:
        print(_render(payload, args.format))
    elif args.format == "table":
        print(table_text)
    else:
        print(_render(payload, "csv"))
    return _EXIT_OK


# -- subcommand handlers ------------------------------------------------------


def _cmd_rearrange(args) -> int:
    x = _load_step(args.input)
    rr = rearrangement(x)
    payload = {
        "x": x.to_json(),
        "star": rr.star.to_json(),
        "level_integral": rr.level_integral.to_json(),
        "star_at_infinity": rat_str(rr.star_at_infinity),
    }
    return _emit(args, payload)


def _cmd_maximal(args) -> int:
    x = _load_step(args.input)
    ts = [parse_rat(p) for p in args.t.split(",")]
    payload = {
        "x": x.to_json(),
        "values": [
            {"t": rat_str(t), "maximal": rat_str(maximal_eval(x, t))} for t in ts
        ],
    }
    return _emit(args, payload)


def _cmd_hlp(args) -> int:
    obj = _load_json(args.input)
    if not isinstance(obj, dict) or "x" not in obj or "y" not in obj:
        raise ParseError('hlp input must be {"x": <stepfn>, "y": <stepfn>}')
    x = StepFunction.from_json(obj["x"])
    y = StepFunction.from_json(obj["y"])
    payload = {
        "x_prec_y": hlp_compare(x, y).to_json(),
        "y_prec_x": hlp_compare(y, x).to_json(),
    }
    return _emit(args, payload)


def _cmd_norm(args) -> int:
    x = _load_step(args.input)
    space = _load_space(args.space)
    payload = {
        "space": space.to_json(),
        "x": x.to_json(),
        "norm": ext_str(norm(space, x)),
    }
    return _emit(args, payload)


def _cmd_fundamental(args) -> int:
    space = _load_space(args.space)
    ts = [parse_rat(p) for p in args.t.split(",")]
    payload = {
        "space": space.to_json(),
        "values": [
            {"t": rat_str(t), "phi": rat_str(fundamental_eval(space, t))} for t in ts
        ],
    }
    if space.alpha == INF:
        payload["embeds_in_L1"] = embeds_in_l1(space)
    return _emit(args, payload)


def _majorant_args(args):
    obj = _load_json(args.input)
    if not isinstance(obj, dict):
        raise ParseError('input must be {"x": <stepfn>, "tau": "p/q", "eps": "p/q"}')
    x = StepFunction.from_json(obj.get("x", obj if "alpha" in obj else None))
    tau = parse_rat(args.tau) if args.tau else parse_rat(obj.get("tau", ""))
    eps = parse_rat(args.eps) if args.eps else parse_rat(obj.get("eps", ""))
    return x, tau, eps


def _cmd_majorant_pair(args) -> int:
    x, tau, eps = _majorant_args(args)
    trace = majorant_pair(x, tau, eps)
    payload = {
        "x": x.to_json(),
        "tau": rat_str(tau),
        "eps": rat_str(eps),
        "trace": trace.to_json(),
    }
    return _emit(args, payload)


def _cmd_sample_member(args) -> int:
    x, tau, eps = _majorant_args(args)
    seed = _resolve_seed(args)
    y = sample_family_member(x, tau, eps, seed)
    payload = {
        "x": x.to_json(),
        "tau": rat_str(tau),
        "eps": rat_str(eps),
        "seed": seed,
        "member": y.to_json(),
        "in_family": family_contains(y, x, tau, eps),
    }
    return _emit(args, payload)


def _cmd_flatten_head(args) -> int:
    x = _load_step(args.input)
    entries = []
    for n in _parse_n_list(args.n):
        y = flatten_head(x, n)
        entries.append({
            "n": n,
            "y": y.to_json(),
            "hlp_holds": hlp_compare(y, x).holds,
        })
    return _emit(args, {"x": x.to_json(), "flattened": entries})


def _probe_common(args):
    x = _load_step(args.input)
    space = _load_space(args.space)
    t_x = parse_rat(args.t_x) if args.t_x else None
    if args.family in ("remark45", "example46_heads"):
        family = builtin_family(args.family)
    else:
        family = builtin_family(args.family, x, t_x)
    n_list = _parse_n_list(args.n)
    deltas = _parse_deltas(args.delta) if args.delta else DEFAULT_DELTAS
    return x, family, space, n_list, deltas


def _cmd_probe_koc(args) -> int:
    x, family, space, n_list, deltas = _probe_common(args)
    tolerance = parse_rat(args.tolerance)
    report = probe_koc(x, family, space, n_list, tolerance, deltas)
    return _emit(args, report.to_json(), report.to_table())


def _cmd_probe_lkm(args) -> int:
    x, family, space, n_list, deltas = _probe_common(args)
    report = probe_lkm(x, family, space, n_list, deltas)
    return _emit(args, report.to_json(), report.to_table())


def _cmd_prop_test(args) -> int:
    seed = _resolve_seed(args)
    result = gen.SUITES[args.suite](args.cases, seed)
    payload = result.to_json()
    summary = (
        f"suite={result.suite} cases={result.cases} seed={result.seed} "
        f"ok={'yes' if result.ok else 'no'} failures={len(result.failures)}"
    )
    if args.format == "table":
        print(summary)
        if not result.ok:
            print(_render({"failures": payload["failures"]}, "table"))
    else:
        print(_render(payload, args.format))
    return _EXIT_OK if result.ok else _EXIT_PROPERTY


# -- replications -------------------------------------------------------------


def _replicate_remark45(args) -> int:
    n_list = _parse_n_list(args.n) if args.n else tuple(range(1, 11))
    space = SpaceSpec("L1", None, INF)
    report = probe_koc(
        box(1, 1), builtin_family("remark45"), space, n_list,
        tolerance=Fraction(1, 100),
    )
    return _emit(args, report.to_json(), report.to_table())


def _replicate_example46(args) -> int:
    n_list = _parse_n_list(args.n) if args.n else tuple(range(1, 11))
    phi = Hyperbolic(Fraction(1))
    space = SpaceSpec("MarcinkiewiczStar", phi, INF)
    x = constant(1, INF)
    report = probe_koc(
        x, builtin_family("example46_heads"), space, n_list,
        tolerance=Fraction(1, 10),
    )
    payload = report.to_json()
    payload["base_norm"] = ext_str(norm(space, x))
    table = f"base point norm = {ext_str(norm(space, x))}\n" + report.to_table()
    return _emit(args, payload, table)


def _replicate_prop32(args, case: int) -> int:
    if case == 1:
        x = box(1, 1)
        tau, eps = Fraction(1, 2), Fraction(1, 4)
    else:
        x = canonicalize([1, 4], [2, 1], 0, INF)
        tau, eps = Fraction(2), Fraction(1, 5)
    trace = majorant_pair(x, tau, eps)
    payload = {
        "x": x.to_json(),
        "tau": rat_str(tau),
        "eps": rat_str(eps),
        "trace": trace.to_json(),
    }
    return _emit(args, payload)


_LEMMA43_X = canonicalize([1, 3], [2, 1], 0, INF)
_LEMMA43_PHI = PiecewiseLinearConcave(INF, (Fraction(1), Fraction(3)),
                                      (Fraction(1), Fraction(2)), Fraction(0))


def _replicate_lemma43(args) -> int:
    n_list = _parse_n_list(args.n) if args.n else tuple(range(1, 11))
    x = _LEMMA43_X
    space = SpaceSpec("Marcinkiewicz", _LEMMA43_PHI, INF)
    t_x = Fraction(1)
    fam_y = builtin_family("lemma43_y", x, t_x)
    fam_x = builtin_family("lemma43_x", x)
    rows = []
    for n in n_list:
        y_n, x_n = fam_y(n), fam_x(n)
        rows.append({
            "n": n,
            "norm_y": ext_str(norm(space, y_n)),
            "norm_x": ext_str(norm(space, x_n)),
            "y_hlp": hlp_compare(y_n, x).holds,
            "x_hlp": hlp_compare(x_n, x).holds,
        })
    payload = {
        "x": x.to_json(),
        "space": space.to_json(),
        "t_x": rat_str(t_x),
        "embeds_in_L1": embeds_in_l1(space),
        "rows": rows,
    }
    lines = [
        f"embeds_in_L1 = {'yes' if payload['embeds_in_L1'] else 'no'}",
        f"{'n':>4}  {'norm_y':>10}  {'norm_x':>10}  {'y_hlp':>6}  {'x_hlp':>6}",
    ]
    for r in rows:
        lines.append(
            f"{r['n']:>4}  {r['norm_y']:>10}  {r['norm_x']:>10}  "
            f"{'yes' if r['y_hlp'] else 'no':>6}  {'yes' if r['x_hlp'] else 'no':>6}"
        )
    return _emit(args, payload, "\n".join(lines))


def _replicate_thm47(args) -> int:
    n_list = _parse_n_list(args.n) if args.n else tuple(range(1, 11))
    x = _LEMMA43_X
    space = SpaceSpec("Marcinkiewicz", _LEMMA43_PHI, INF)
    star = rearrangement(x).star
    rows = []
    for n in n_list:
        y_n = flatten_head(x, n)
        head = fundamental_eval(space, n) * maximal_eval(x, n)
        tail_norm = norm(space, star.window(n, None))
        bound = head + tail_norm
        norm_y = norm(space, y_n)
        rows.append({
            "n": n,
            "norm_y": ext_str(norm_y),
            "head_term": rat_str(head),
            "tail_norm": ext_str(tail_norm),
            "bound": ext_str(bound),
            "within_bound": norm_y <= bound,
        })
    payload = {"x": x.to_json(), "space": space.to_json(), "rows": rows}
    lines = [
        f"{'n':>4}  {'norm_y':>10}  {'head_term':>10}  {'tail_norm':>10}  "
        f"{'bound':>10}  ok",
    ]
    for r in rows:
        lines.append(
            f"{r['n']:>4}  {r['norm_y']:>10}  {r['head_term']:>10}  "
            f"{r['tail_norm']:>10}  {r['bound']:>10}  "
            f"{'yes' if r['within_bound'] else 'no'}"
        )
    return _emit(args, payload, "\n".join(lines))


def _cmd_replicate(args) -> int:
    target = args.target
    if target == "remark45":
        return _replicate_remark45(args)
    if target == "example46":
        return _replicate_example46(args)
    if target == "prop32-case1":
        return _replicate_prop32(args, 1)
    if target == "prop32-case2":
        return _replicate_prop32(args, 2)
    if target == "lemma43":
        return _replicate_lemma43(args)
    return _replicate_thm47(args)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rearrcalc",
        description="Exact rearrangement and majorization calculus on step functions.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, input_help="step function JSON (inline, file path, or '-')"):
        sp.add_argument("--input", required=True, help=input_help)
        sp.add_argument("--format", choices=("json", "table", "csv"), default="json")

    sp = sub.add_parser("rearrange", help="decreasing rearrangement and level integral")
    common(sp)
    sp.set_defaults(handler=_cmd_rearrange)

    sp = sub.add_parser("maximal", help="maximal function x**(t)")
    common(sp)
    sp.add_argument("--t", required=True, help="rational t, or a comma list")
    sp.set_defaults(handler=_cmd_maximal)

    sp = sub.add_parser("hlp", help="Hardy-Littlewood-Polya comparison")
    common(sp, 'JSON {"x": <stepfn>, "y": <stepfn>}')
    sp.set_defaults(handler=_cmd_hlp)

    sp = sub.add_parser("norm", help="norm of x in a space")
    common(sp)
    sp.add_argument("--space", required=True, help="space JSON (inline or file)")
    sp.set_defaults(handler=_cmd_norm)

    sp = sub.add_parser("fundamental", help="fundamental function of a space")
    sp.add_argument("--space", required=True, help="space JSON (inline or file)")
    sp.add_argument("--t", required=True, help="rational t, or a comma list")
    sp.add_argument("--format", choices=("json", "table", "csv"), default="json")
    sp.set_defaults(handler=_cmd_fundamental)

    for name, handler in (
        ("majorant-pair", _cmd_majorant_pair),
        ("sample-member", _cmd_sample_member),
    ):
        sp = sub.add_parser(name, help=f"{name.replace('-', ' ')} for M(x, tau, eps)")
        common(sp, 'JSON {"x": <stepfn>, "tau": "p/q", "eps": "p/q"}')
        sp.add_argument("--tau", help="overrides tau from the input JSON")
        sp.add_argument("--eps", help="overrides eps from the input JSON")
        if name == "sample-member":
            sp.add_argument("--seed", type=int, default=0)
        sp.set_defaults(handler=handler)

    sp = sub.add_parser("flatten-head", help="average x* over [0, n)")
    common(sp)
    sp.add_argument("--n", required=True, help="N or A..B")
    sp.set_defaults(handler=_cmd_flatten_head)

    for name, handler in (("probe-koc", _cmd_probe_koc), ("probe-lkm", _cmd_probe_lkm)):
        sp = sub.add_parser(name, help=f"{name} run over an index list")
        common(sp)
        sp.add_argument("--family", required=True,
                        choices=("remark45", "example46_heads", "lemma43_y",
                                 "lemma43_x", "thm47_flatten"))
        sp.add_argument("--t-x", dest="t_x", help="t_x for lemma43_y")
        sp.add_argument("--space", required=True)
        sp.add_argument("--n", required=True, help="N or A..B")
        sp.add_argument("--delta", help="comma list of positive rationals")
        if name == "probe-koc":
            sp.add_argument("--tolerance", required=True, help="positive rational")
        sp.set_defaults(handler=handler)

    sp = sub.add_parser("replicate", help="canned replications")
    sp.add_argument("target", choices=("remark45", "example46", "prop32-case1",
                                       "prop32-case2", "lemma43", "thm47"))
    sp.add_argument("--n", help="N or A..B (where applicable)")
    sp.add_argument("--format", choices=("json", "table", "csv"), default="table")
    sp.set_defaults(handler=_cmd_replicate)

    sp = sub.add_parser("prop-test", help="randomized property suites")
    sp.add_argument("suite", choices=tuple(gen.SUITES))
    sp.add_argument("--cases", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "table", "csv"), default="json")
    sp.set_defaults(handler=_cmd_prop_test)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else _EXIT_PARSE
    try:
        return args.handler(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_PARSE
    except RearrCalcError as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
