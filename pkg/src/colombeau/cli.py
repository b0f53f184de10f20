"""Command-line front end.

``run(argv)`` returns ``(exit code, report text)`` and never exits the
process; ``main`` prints the report and exits with the code.  Exit codes:
0 success, 1 numerical failure, 2 parse or usage error, 3 domain error,
4 a verdict hidden behind a tail.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import literals as L
from . import suites
from .config import DEFAULT, Config
from .errors import DomainError, NumericError, ParseError, Undecided
from .fermat_reyes import incremental_ratio, near_std_thickening, verify_fr
from .genfun import Exhausted, GenFunExpr, gf_eval_gen, gf_probe_nonzero
from .gennum import (
    DistInterval,
    GenNum,
    Relation,
    gn_abs,
    gn_invert,
    gn_metric,
    gn_near_standard_decompose,
    gn_order_compare,
    gn_sharp_dist,
    valuation_bound,
)
from .report import VerdictReport, jsonable
from .series import EpsSeries

EXIT_OK, EXIT_NUMERIC, EXIT_PARSE, EXIT_DOMAIN, EXIT_UNKNOWN = 0, 1, 2, 3, 4

# display snapping of float coefficients: small denominators only, near-exact match
SNAP_DENOMINATOR = 10**6
SNAP_RTOL = 1e-12


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# -- display ------------------------------------------------------------------------------


def snap(c):
    """A float coefficient shown as a small-denominator rational when it matches one to ``SNAP_RTOL``."""
    if not isinstance(c, float) or c == 0:
        return c
    q = Fraction(c).limit_denominator(SNAP_DENOMINATOR)
    return q if abs(float(q) - c) <= SNAP_RTOL * abs(c) else c


def snapped(x: GenNum) -> GenNum:
    return x.map(lambda b: EpsSeries(tuple((e, snap(c)) for e, c in b.terms), b.tail))


def show(x) -> str:
    if isinstance(x, GenNum):
        return L.format_gennum(x)
    if isinstance(x, float):
        return f"{x:.9f}"
    return str(x)


# -- commands -----------------------------------------------------------------------------


def _gennum(text: str) -> GenNum:
    return L.parse_gennum(text)


def cmd_eval(a, cfg):
    f = GenFunExpr.parse(a.expr, a.U)
    x = _gennum(a.x)
    value = gf_eval_gen(f, x, cfg)
    return {"f": str(f), "x": show(x)}, {"value": show(value)}, EXIT_OK


def cmd_dist(a, cfg):
    x, y = _gennum(a.x), _gennum(a.y)
    if a.kind == "sharp":
        d = gn_sharp_dist(x, y)
    else:
        d = gn_metric(a.kind, x, y)
    code = EXIT_UNKNOWN if isinstance(d, DistInterval) else EXIT_OK
    shown = [show(d.lo), show(d.hi)] if isinstance(d, DistInterval) else show(d)
    return {"kind": a.kind, "x": show(x), "y": show(y)}, {"distance": shown}, code


def cmd_valuation(a, cfg):
    x = _gennum(a.x)
    lo, hi = valuation_bound(x)
    code = EXIT_OK if lo == hi else EXIT_UNKNOWN
    value = str(lo) if lo == hi else [str(lo), str(hi)]
    return {"x": show(x)}, {"valuation": value, "exact": lo == hi}, code


def cmd_abs(a, cfg):
    x = _gennum(a.x)
    return {"x": show(x)}, {"abs": show(gn_abs(x))}, EXIT_OK


def cmd_order(a, cfg):
    x, y = _gennum(a.x), _gennum(a.y)
    v = gn_order_compare(x, y)
    code = EXIT_UNKNOWN if v.relation is Relation.UNKNOWN else EXIT_OK
    return {"x": show(x), "y": show(y)}, {"relation": str(v)}, code


def cmd_invert(a, cfg):
    x = _gennum(a.x)
    return {"x": show(x)}, {"inverse": show(gn_invert(x, cfg))}, EXIT_OK


def cmd_decompose(a, cfg):
    x = _gennum(a.x)
    st, delta = gn_near_standard_decompose(x)
    return {"x": show(x)}, {"standard": L.format_coeff(st), "infinitesimal": show(delta)}, EXIT_OK


def cmd_fr(a, cfg):
    f = GenFunExpr.parse(a.f, a.U)
    x, h = _gennum(a.x), _gennum(a.h)
    r = incremental_ratio(f, x, h, cfg=cfg)
    inputs = {"f": str(f), "U": L.format_openset(f.domain), "x": show(x), "h": show(h)}
    result = {"r": show(snapped(r)), "r_raw": show(r)}
    if not a.no_verify:
        rep = verify_fr(f, x, h, cfg=cfg)
        result["verified"] = rep.passed
        result["checks"] = rep.to_dict()["rows"]
    return inputs, result, EXIT_OK


def cmd_thicken(a, cfg):
    U = L.parse_openset(a.U)
    x, h = _gennum(a.x), _gennum(a.h)
    t = near_std_thickening(U, x, h)
    return {"U": L.format_openset(U), "x": show(x), "h": show(h)}, {"contained": t.contained, "a": t.a}, EXIT_OK


def cmd_probe(a, cfg):
    f = GenFunExpr.parse(a.expr, a.U)
    out = gf_probe_nonzero(f, cfg=cfg)
    if isinstance(out, Exhausted):
        return {"f": str(f)}, {"found": False, "probes": out.probes}, EXIT_OK
    result = {"found": True, "probes": out.probes, "x": show(out.x), "value": show(snapped(out.value))}
    return {"f": str(f)}, result, EXIT_OK


def cmd_demo(a, cfg):
    fn = suites.DEMOS[a.name]
    kw = {}
    if a.name == "conv-ex":
        kw["kmax"] = a.kmax
    elif a.seed is not None and "seed" in fn.__code__.co_varnames:
        kw["seed"] = a.seed
    res = fn(**kw)
    code = EXIT_OK if res.report.passed is not False else EXIT_NUMERIC
    return {"name": a.name, **kw}, res.report, code


COMMANDS = {
    "eval": cmd_eval,
    "dist": cmd_dist,
    "valuation": cmd_valuation,
    "abs": cmd_abs,
    "order": cmd_order,
    "invert": cmd_invert,
    "decompose": cmd_decompose,
    "fr": cmd_fr,
    "thicken": cmd_thicken,
    "probe": cmd_probe,
    "demo": cmd_demo,
}


# -- argument grammar -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    common.add_argument("--Q", default=str(DEFAULT.order), help="working tail order")
    common.add_argument("--seed", type=int, default=None)

    p = _Parser(prog="colombeau", description="Generalized numbers, sharp topology and Fermat-Reyes ratios.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="evaluate f at a generalized point")
    s.add_argument("expr")
    s.add_argument("--x", required=True)
    s.add_argument("--U", default=None)

    s = sub.add_parser("dist", parents=[common], help="sharp, Fermat or omega distance")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--sharp", dest="kind", action="store_const", const="sharp")
    g.add_argument("--fermat", dest="kind", action="store_const", const="fermat")
    g.add_argument("--omega", dest="kind", action="store_const", const="omega")
    s.set_defaults(kind="sharp")
    s.add_argument("x")
    s.add_argument("y")

    for name, doc in (("valuation", "valuation v(x)"), ("abs", "generalized absolute value"),
                      ("invert", "multiplicative inverse"), ("decompose", "standard and infinitesimal parts")):
        s = sub.add_parser(name, parents=[common], help=doc)
        s.add_argument("x")

    s = sub.add_parser("order", parents=[common], help="compare two generalized numbers")
    s.add_argument("x")
    s.add_argument("y")

    s = sub.add_parser("fr", parents=[common], help="Fermat-Reyes incremental ratio")
    s.add_argument("--f", required=True)
    s.add_argument("--U", default=None)
    s.add_argument("--x", required=True)
    s.add_argument("--h", required=True)
    s.add_argument("--no-verify", action="store_true")

    s = sub.add_parser("thicken", parents=[common], help="membership in the near-standard thickening")
    s.add_argument("--U", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--h", required=True)

    s = sub.add_parser("probe", parents=[common], help="search for an invertible point where f is nonzero")
    s.add_argument("expr")
    s.add_argument("--U", default=None)

    s = sub.add_parser("demo", parents=[common], help="run a demonstration suite")
    s.add_argument("name", choices=sorted(suites.DEMOS))
    s.add_argument("--kmax", type=int, default=100)
    return p


# -- serialization --------------------------------------------------------------------------


def _envelope(command, cfg, seed, inputs, result, diagnostics) -> dict:
    config = {"Q": str(cfg.order), "tolerances": {"tol": cfg.tol, "quad_tol": cfg.quad_tol}, "seed": seed}
    if isinstance(result, VerdictReport):
        result = result.to_dict()
    return {"command": command, "config": config, "inputs": jsonable(inputs),
            "result": jsonable(result), "diagnostics": diagnostics}


def _render(fmt: str, env: dict, result) -> str:
    if fmt == "json":
        return json.dumps(env, indent=2)
    if isinstance(result, VerdictReport):
        return result.to_csv() if fmt == "csv" else result.to_plain() + "\n"
    flat = {k: v for k, v in env["result"].items() if not isinstance(v, (list, dict)) or k != "checks"}
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow([json.dumps(v) if isinstance(v, (list, dict)) else v for v in flat.values()])
        return buf.getvalue()
    lines = [f"{k}: {v}" for k, v in flat.items()]
    for row in env["result"].get("checks", []):
        lines.append(f"  {row['check']}: {row['value']} (tol {row['tolerance']}) {row['passed']}")
    return "\n".join(lines) + "\n"


def run(argv) -> tuple[int, str]:
    """Parse ``argv``, run one subcommand and return ``(exit code, report)``.

    Failures put a one-line message into ``diagnostics`` and also on stderr.
    """
    try:
        args = build_parser().parse_args(list(argv))
        cfg = Config(order=Fraction(args.Q))
    except (_UsageError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE, ""

    fmt = args.format
    try:
        inputs, result, code = COMMANDS[args.command](args, cfg)
        diagnostics = []
    except ParseError as exc:
        code, inputs, result, diagnostics = EXIT_PARSE, {}, None, [str(exc)]
    except DomainError as exc:
        code, inputs, result, diagnostics = EXIT_DOMAIN, {}, None, [f"{type(exc).__name__}: {exc}"]
    except Undecided as exc:
        code, inputs, result, diagnostics = EXIT_UNKNOWN, {}, None, [f"UNKNOWN beyond order {exc.order}: {exc}"]
    except NumericError as exc:
        code, inputs, result, diagnostics = EXIT_NUMERIC, {}, None, [f"NumericError: {exc}"]
    for d in diagnostics:
        print(d, file=sys.stderr)
    if result is None:
        env = _envelope(args.command, cfg, args.seed, inputs, {}, diagnostics)
        return code, json.dumps(env, indent=2) if fmt == "json" else ""
    env = _envelope(args.command, cfg, args.seed, inputs, result, diagnostics)
    return code, _render(fmt, env, result)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
