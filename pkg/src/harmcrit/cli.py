"""Command-line front end: ``harmcrit {invariants,curve,construct,verify,demo}``.

Exit codes: 0 success, 1 parse or usage error, 2 typed rejection (or an
infeasible construction request), 3 a constructed germ failed its recheck.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .analytic import (AnalyticError, AnalyticGerm, j_via_Mn, mu_regular, recenter2,
                       regular_test, sample_gradient_flow, whitney_classify)
from .field import CycloNumber, make_gaussian
from .harmonic import (ConstructionError, GermError, HarmonicGerm, SmoothCriticalRejection,
                       classify_model, construct_germ, j_invariant, recenter1, sample_curves,
                       smooth_critical_test)
from .intersection import local_intersection
from .series import OrderValue
from .textfmt import GermSpec, ParseError, format_cyclo, format_germ_spec, parse_germ_spec

__all__ = ["main", "build_parser", "harmonic_report", "analytic_report", "DEMO_FIXTURES"]

EXIT_OK, EXIT_PARSE, EXIT_REJECT, EXIT_MISMATCH = 0, 1, 2, 3
SCHEMA = 1


class _Rejected(Exception):
    pass


def _ov(v: OrderValue):
    return v.to_json()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=False) + "\n"
    lines = []
    for k, v in report.items():
        if k == "schema":
            continue
        if isinstance(v, dict):
            lines.append(f"{k}:")
            lines += [f"  {kk}: {json.dumps(vv)}" for kk, vv in v.items()]
        else:
            lines.append(f"{k}: {json.dumps(v) if not isinstance(v, str) else v}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# germ assembly
# ---------------------------------------------------------------------------


def _harmonic_from_spec(spec: GermSpec) -> HarmonicGerm:
    if spec.kind == "pm":
        return HarmonicGerm.pm(spec.p, spec.m)
    p, q = spec.p, spec.q
    if spec.at:
        z0 = spec.at[0] if len(spec.at) == 1 else spec.at[0] + spec.at[1] * make_gaussian(0, 1)
        if not z0.is_zero():
            p, q = recenter1(p, z0), recenter1(q, z0)
    else:
        # drop a constant term: the base point maps to f(0)
        if not p.coeff(0).is_zero() or not q.coeff(0).is_zero():
            raise GermError("p(0) and q(0) must vanish; give 'at' or remove constants")
    return HarmonicGerm(p, q)


def _analytic_from_spec(spec: GermSpec) -> AnalyticGerm:
    f1, f2 = spec.f1, spec.f2
    if spec.at and any(not v.is_zero() for v in spec.at):
        x0, y0 = (v.to_fraction() for v in spec.at)
        f1, f2 = recenter2(f1, x0, y0), recenter2(f2, x0, y0)
    return AnalyticGerm(f1, f2)


def harmonic_report(g: HarmonicGerm) -> dict:
    rep = j_invariant(g)
    model = None
    if rep.j.is_exact and rep.j.k >= rep.m:
        t = classify_model(rep.m, rep.j.k)
        model = {
            "shape": t.shape,
            "candidates": [list(c) for c in t.candidates],
            "degree_abs": t.degree_abs,
            "fibers": list(t.fiber_counts),
            "unique": t.unique_flag,
        }
    diag = {k: (format_cyclo(v) if isinstance(v, CycloNumber) else
                _ov(v) if isinstance(v, OrderValue) else v) for k, v in rep.diagnostics.items()}
    diag["trunc"] = g.trunc
    if rep.order_pair is None:
        diag["order_pair_note"] = "degenerate" if rep.j.is_infinite else "undetermined at this truncation"
    return {
        "schema": SCHEMA,
        "kind": "harmonic",
        "m": rep.m,
        "mu": _ov(rep.mu),
        "j": _ov(rep.j),
        "order_pair": [_ov(x) for x in rep.order_pair] if rep.order_pair else None,
        "model": model,
        "diagnostics": diag,
    }


def analytic_report(g: AnalyticGerm) -> dict:
    if not regular_test(g):
        raise _Rejected("the origin is not a regular critical point")
    trace = j_via_Mn(g)
    mu = mu_regular(g, trace)
    j = trace.j if (mu.is_exact or not mu.is_infinite) else OrderValue.infinite()
    return {
        "schema": SCHEMA,
        "kind": "analytic",
        "j": _ov(j),
        "mu": _ov(mu),
        "class": whitney_classify(mu).value,
        "diagnostics": {
            "M": [format_cyclo(v) for v in trace.values],
            "decidable_terms": trace.decidable,
            "trunc": g.trunc,
        },
    }


def _parse(text: str, trunc: int) -> GermSpec:
    return parse_germ_spec(text, trunc)


def _read_spec(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    return arg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_invariants(args) -> int:
    spec = _parse(_read_spec(args.spec), args.trunc)
    if spec.kind == "analytic":
        report = analytic_report(_analytic_from_spec(spec))
    else:
        report = harmonic_report(_harmonic_from_spec(spec))
    _emit(_render(report, args.json), args.out)
    return EXIT_OK


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else repr(float(x))


def cmd_curve(args) -> int:
    spec = _parse(_read_spec(args.spec), args.trunc)
    rows = []
    if spec.kind == "analytic":
        g = _analytic_from_spec(spec)
        t_max = args.t_max if args.t_max is not None else 0.1
        res = sample_gradient_flow(g, t_max, args.samples)
        rows.append("t,gamma_x,gamma_y,re_sigma,im_sigma")
        for s in res.samples:
            x, y = s.gamma
            rows.append(",".join(_fmt(v) for v in (s.t, x.real, y.real, s.sigma.real, s.sigma.imag)))
        for n, d in enumerate(res.derivatives, start=1):
            rows.append(f"# sigma_d{n}={_fmt(d.real)},{_fmt(d.imag)}")
        rows.append(f"# richardson_gap={res.richardson_gap:.3e}")
        scale = max((abs(d) for d in res.derivatives), default=0.0)
        j_hat = next((n for n, d in enumerate(res.derivatives, start=1)
                      if abs(d) > 1e-5 * max(1.0, scale)), None)
        rows.append(f"# j_hat={j_hat if j_hat is not None else '>4'}")
    else:
        g = _harmonic_from_spec(spec)
        data = smooth_critical_test(g)
        t_min = args.t_min if args.t_min is not None else -0.5
        t_max = args.t_max if args.t_max is not None else 0.5
        res = sample_curves(g, data, t_min, t_max, args.samples)
        rows.append("t,re_gamma,im_gamma,re_beta,im_beta,R,kappa")
        for s in res.samples:
            rows.append(",".join(_fmt(v) for v in (s.t, s.gamma.real, s.gamma.imag, s.beta.real,
                                                     s.beta.imag, s.R, s.kappa)))
        if res.failures:
            rows.append(f"# partial=true failures={res.failures}")
        rows.append(f"# j_hat={res.j_hat if res.j_hat is not None else 'inf'} slope={res.slope:.6f}")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def _parse_mu(text: str):
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return OrderValue.infinite()
    return int(text)


def cmd_construct(args) -> int:
    try:
        mu = _parse_mu(args.mu)
    except ValueError:
        raise ParseError("mu must be an integer or 'inf'", args.mu, 0)
    try:
        g = construct_germ(args.m, mu, trunc=args.trunc)
    except AssertionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    report = harmonic_report(g)
    want_inf = isinstance(mu, OrderValue)
    got = OrderValue.from_json(report["mu"])
    agrees = (not got.is_exact) if want_inf else (got.is_exact and got.k == mu)
    text = format_germ_spec(GermSpec("pm", p=g.base, m=g.power))
    if args.json:
        out = {"schema": SCHEMA, "germ": text, "report": report, "agrees": agrees}
        _emit(json.dumps(out) + "\n", args.out)
    else:
        _emit(text + "\n" + _render(report, False), args.out)
    return EXIT_OK if agrees else EXIT_MISMATCH


def cmd_verify(args) -> int:
    from .verify import run_verify

    if args.cases < 0:
        raise ParseError("--cases must be non-negative", str(args.cases), 0)
    summary = run_verify(args.seed, args.cases, args.max_degree, args.max_m)
    header = f"verify seed={args.seed} cases={args.cases} max_degree={args.max_degree} max_m={args.max_m}"
    _emit("\n".join([header] + summary.lines() + summary.failures) + "\n", args.out)
    return EXIT_OK if summary.all_passed else 1


# fixtures: (label, kind, input, expected)
DEMO_FIXTURES = [
    ("generic case m=1", "invariants", "pm: p = z + z^2; m = 1", {"mu": 2, "j": 1, "order_pair": [1, "inf"]}),
    ("b = i, m=1", "invariants", "pm: p = z + (0,1)*z^2; m = 1", {"mu": 3, "j": 2, "order_pair": [2, 3]}),
    ("b = i, m=2", "invariants", "pm: p = z + (0,1)*z^2; m = 2", {"mu": 7, "j": 3}),
    ("b = zeta8, m=2", "invariants", "pm: p = z + zeta(8)*z^2; m = 2", {"mu": 6, "j": 2}),
    ("mu = inf germ, trunc 32", "invariants32", "pm: p = -z - z^2 - z^3 - z^4 - z^5 - z^6 - z^7 - z^8 - z^9 - z^10"
     " - z^11 - z^12 - z^13 - z^14 - z^15 - z^16 - z^17 - z^18 - z^19 - z^20 - z^21 - z^22 - z^23 - z^24"
     " - z^25 - z^26 - z^27 - z^28 - z^29 - z^30 - z^31 - z^32 + O(z^33); m = 1", {"mu": ">=33"}),
    ("p_5 recipe, m=1", "construct", (1, "5"), {"mu": 5, "j": 4}),
    ("generic b, m=2", "construct", (2, "6"), {"mu": 6, "j": 2}),
    ("p_5 recipe, m=2", "construct", (2, "9"), {"mu": 9, "j": 5}),
    ("fold", "invariants", "f1 = x; f2 = y^2", {"j": 1, "mu": 2, "class": "fold"}),
    ("cusp", "invariants", "f1 = x; f2 = x*y + y^3", {"j": 2, "mu": 3, "class": "cusp"}),
    ("collapse", "invariants", "f1 = x; f2 = x*y", {"mu": "inf", "class": "collapse"}),
    ("example A", "intersection", ("x", "x^2*y^2 + y^4"), {"mu": 4}),
    ("Puiseux pair c=1", "intersection", ("x^2 + y^2", "x^5 + x^3*y^2 + x*y^4"), {"mu": 10}),
    ("Puiseux pair c=2", "intersection", ("x^2 + y^2", "x^5 + 2*x^3*y^2 + x*y^4"), {"mu": "inf"}),
]


def _run_fixture(kind, data) -> dict:
    from .textfmt import parse_series2

    if kind in ("invariants", "invariants32"):
        spec = _parse(data, 32 if kind == "invariants32" else 64)
        if spec.kind == "analytic":
            return analytic_report(_analytic_from_spec(spec))
        return harmonic_report(_harmonic_from_spec(spec))
    if kind == "construct":
        m, mu = data
        return harmonic_report(construct_germ(m, _parse_mu(mu)))
    F, G = (parse_series2(s) for s in data)
    return {"mu": _ov(local_intersection(F, G))}


def cmd_demo(args) -> int:
    lines = []
    ok_all = True
    for label, kind, data, expected in DEMO_FIXTURES:
        try:
            got = _run_fixture(kind, data)
            ok = all(got.get(k) == v for k, v in expected.items())
            shown = {k: got.get(k) for k in expected}
        except Exception as exc:  # report and keep going
            ok, shown = False, f"{type(exc).__name__}: {exc}"
        ok_all &= ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {label}: expected {expected}, got {shown}")
    lines.append("demo: " + ("all fixtures reproduced" if ok_all else "MISMATCH"))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok_all else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _trunc(text: str) -> int:
    v = int(text)
    if not 8 <= v <= 256:
        raise argparse.ArgumentTypeError("truncation must lie in [8, 256]")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("count must be at least 1")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors share the parse-error exit code
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc", type=_trunc, default=64, help="series truncation order (8..256)")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--out", default=None, help="write output to PATH")

    ap = _Parser(prog="harmcrit", description="Invariants of harmonic and analytic planar germs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("invariants", parents=[common], help="report m, mu, j and the model")
    p.add_argument("spec", help="germ text, or '-' for stdin")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("curve", parents=[common], help="CSV samples of the critical curves")
    p.add_argument("spec")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--samples", type=_count, default=101)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("construct", parents=[common], help="germ p^m - conj(z)^m with given mu")
    p.add_argument("m", type=int)
    p.add_argument("mu", help="integer or 'inf'")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="seeded randomized property checks")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--max-m", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", parents=[common], help="replay the worked examples")
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SmoothCriticalRejection as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except (_Rejected, GermError, AnalyticError, ConstructionError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT


if __name__ == "__main__":
    sys.exit(main())
