"""Command-line entry point: reduce, verify, branches, scan, molien, covariants.

Exit codes: 0 ok, 1 usage, 2 regime violation, 3 verification failure,
4 no branch, 5 non-convex leading form.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .critical import (NonConvexError, branch_critical_value, branch_stability,
                       existence_condition, minimize_classify, reduced6_expansion,
                       reduced8_expansion, representative)
from .landau import LdGCoefficients, RegimeError, format_rational, parse_rational
from .normalize import UnreachableTarget, format_exact, reduce, resolve_regime
from .poly5 import evaluate
from .so3rep import catalog, check_covariance, independent_count, invariants, molien_series, orbit_geometry

EXIT_OK, EXIT_USAGE, EXIT_REGIME, EXIT_VERIFY, EXIT_NOBRANCH, EXIT_NONCONVEX = range(6)

BRANCH_COLUMNS = ("case", "x1", "x2", "x3", "x4", "x5", "T2", "T3", "omega_paper",
                  "omega_trace", "amplitude", "ev1", "ev2", "ev3", "ev4", "ev5",
                  "cf1", "cf2", "cf3", "cf4", "cf5", "closed_form_agrees", "stable")
SCAN_COLUMNS = ("index", "lambda", "eta", "c", "n_minima", "labels", "min_value",
                "t2_values", "t3_values", "t3_degenerate", "window")
MOLIEN_COLUMNS = ("degree", "invariants_molien", "invariants_rank", "covariants_molien",
                  "covariants_rank", "labels")
COVARIANT_COLUMNS = ("label", "degree", "t2_power", "t3_power", "base", "covariant")

_EPILOG = f"""\
CSV columns (fixed order):
  branches:   {",".join(BRANCH_COLUMNS)}
  scan:       {",".join(SCAN_COLUMNS)}
  molien:     {",".join(MOLIEN_COLUMNS)}
  covariants: {",".join(COVARIANT_COLUMNS)}

Grid: comma-separated NAME=START:STOP:NUM (linspace) or NAME=V1;V2;...
with NAME in lambda, eta, c1..c9.  Output never uses color, so NO_COLOR
is honored trivially.

Exit codes: 0 ok, 1 usage, 2 regime, 3 verification, 4 no branch, 5 non-convex.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    """CSV cell: exact values as ``num/den``, floats with 17 significant digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return format(v, ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return format_rational(v)
    if v is None:
        return ""
    return format_exact(v) if not isinstance(v, str) else v


def _jfloat(v):
    return None if v is None else float(format(float(v), ".17g"))


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ldgnormal", description="Normal-form reduction of Landau-deGennes potentials.",
                epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"ldgnormal {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    coeffs = _Parser(add_help=False)
    coeffs.add_argument("--input", default=None, help="JSON coefficient record file")
    coeffs.add_argument("--c", default=None, help="inline c1,c2,... (missing trailing entries are 0)")
    red = _Parser(add_help=False)
    red.add_argument("--order", type=int, choices=(6, 8), default=6)
    red.add_argument("--regime", choices=("regular", "singular", "auto"), default="auto")
    red.add_argument("--mode", choices=("full", "xi_only"), default="full")
    red.add_argument("--case", choices=("a", "b", "c"), default="a")
    red.add_argument("--k4", default="0")
    red.add_argument("--k8", default="0")
    red.add_argument("--method", choices=("diagonal", "full"), default="diagonal")
    par = _Parser(add_help=False)
    par.add_argument("--lambda", dest="lam", type=float, default=None)
    par.add_argument("--eta", type=float, default=None)
    par.add_argument("--seed", type=int, default=0)
    par.add_argument("--jobs", type=int, default=1)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    sub.add_parser("reduce", parents=[common, coeffs, red], help="compute and verify a reduction")
    sub.add_parser("verify", parents=[common, coeffs, red],
                   help="reduce with both substitution methods and list printed-formula checks")
    sub.add_parser("branches", parents=[common, par], help="branch/stability table for (lambda, eta)")
    sc = sub.add_parser("scan", parents=[common, coeffs, par], help="phase scan over a grid")
    sc.add_argument("--grid", default="", help="grid axes, see below")
    sc.add_argument("--order", type=int, choices=(6, 8), default=8)
    sc.add_argument("--starts", type=int, default=16)
    mo = sub.add_parser("molien", parents=[common], help="Molien counts with rank cross-check")
    mo.add_argument("--max-degree", type=int, default=8)
    cv = sub.add_parser("covariants", parents=[common], help="covariant catalog")
    cv.add_argument("--degree", type=int, default=None)
    return p


def _read_coefficients(args) -> LdGCoefficients:
    if args.input and args.c:
        raise UsageError("give either --input or --c, not both")
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            return LdGCoefficients.from_json(json.load(fh))
    if args.c:
        vals = [s for s in args.c.split(",") if s.strip()]
        if len(vals) > 9:
            raise UsageError("at most 9 coefficients")
        try:
            vals = [parse_rational(v) for v in vals]
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad coefficient: {exc}") from exc
        return LdGCoefficients.from_sequence(vals + [Fraction(0)] * (9 - len(vals)))
    raise UsageError("coefficients required: --input FILE or --c c1,c2,...")


def _config(args, **resolved) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}
    for k, v in list(cfg.items()):
        if isinstance(v, Fraction):
            cfg[k] = format_rational(v)
    cfg.update(resolved)
    return cfg


def _emit(text: str, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _header(cfg) -> dict:
    return {"tool": {"name": "ldgnormal", "version": __version__}, "config": cfg}


# -- commands ------------------------------------------------------------------------

def _rational_arg(s, name):
    try:
        return parse_rational(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{name}: not a rational: {s!r}") from exc


def run_reduce(args):
    c = _read_coefficients(args)
    k4, k8 = _rational_arg(args.k4, "k4"), _rational_arg(args.k8, "k8")
    regime = resolve_regime(c, args.regime)
    cfg = _config(args, resolved_regime=regime, k4=format_rational(k4), k8=format_rational(k8))
    rep = reduce(c, args.order, regime, args.mode, args.case, k4, k8, args.method)
    doc = rep.to_json(cfg)
    if (args.format or "json") == "csv":
        rows = [{"key": k, "value": v} for k, v in doc["ks"].items()]
        rows += [{"key": f"surviving.{k}", "value": v} for k, v in doc["surviving"].items()]
        rows.append({"key": "verified", "value": rep.verified})
        text = _csv(("key", "value"), rows)
    else:
        text = _json(doc)
    _emit(text, args)
    if not rep.verified:
        print("verification failed; residual: " + json.dumps(doc["residual"]), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def run_verify(args):
    c = _read_coefficients(args)
    k4, k8 = _rational_arg(args.k4, "k4"), _rational_arg(args.k8, "k8")
    regime = resolve_regime(c, args.regime)
    cfg = _config(args, resolved_regime=regime, k4=format_rational(k4), k8=format_rational(k8))
    reports = {}
    for method in ("diagonal", "full"):
        reports[method] = reduce(c, args.order, regime, args.mode, args.case, k4, k8, method)
    same = reports["diagonal"].reduced.surviving == reports["full"].reduced.surviving
    ok = all(r.verified for r in reports.values()) and same
    doc = _header(cfg)
    doc.update({
        "form": reports["diagonal"].reduced.form,
        "verified_diagonal": reports["diagonal"].verified,
        "verified_full": reports["full"].verified,
        "methods_agree": same,
        "comparisons": [cmp.to_json() for cmp in reports["diagonal"].comparisons],
        "printed_mismatches": [cmp.quantity for cmp in reports["diagonal"].comparisons
                               if not cmp.match],
        "notes": reports["diagonal"].notes,
    })
    if (args.format or "json") == "csv":
        rows = [{"quantity": cmp.quantity, "kind": cmp.kind, "match": cmp.match, "note": cmp.note}
                for cmp in reports["diagonal"].comparisons]
        text = _csv(("quantity", "kind", "match", "note"), rows)
    else:
        text = _json(doc)
    _emit(text, args)
    return EXIT_OK if ok else EXIT_VERIFY


def branch_rows(lam: float, eta: float) -> list:
    """One row per case (a)-(d) at the representative point."""
    t2p, t3p = invariants()
    rows = []
    for case in "abcd":
        amp = branch_critical_value(lam, eta, case)
        spec = branch_stability(case, lam, eta)
        pt = [float(v) for v in representative(case, amp.x1)]
        geo = orbit_geometry(pt)
        r = {"case": case, "amplitude": float(amp.x1),
             "T2": float(evaluate(t2p, pt)), "T3": float(evaluate(t3p, pt)),
             "omega_paper": geo.omega_paper, "omega_trace": geo.omega_trace,
             "closed_form_agrees": spec.agrees, "stable": spec.stable}
        r.update({f"x{i + 1}": v for i, v in enumerate(pt)})
        r.update({f"ev{i + 1}": v for i, v in enumerate(spec.eigenvalues)})
        r.update({f"cf{i + 1}": v for i, v in enumerate(spec.closed_form)})
        rows.append(r)
    return rows


def run_branches(args):
    if args.lam is None or args.eta is None:
        raise UsageError("branches needs --lambda and --eta")
    lam, eta = args.lam, args.eta
    if 27 + 4 * eta == 0 or not existence_condition(lam, eta) or not branch_critical_value(lam, eta).exists:
        print(f"no real branch for lambda={lam!r}, eta={eta!r}: requires lambda >= 0 and "
              f"eta > -27/4, or lambda <= 0 and eta < -27/4", file=sys.stderr)
        return EXIT_NOBRANCH
    rows = branch_rows(lam, eta)
    if (args.format or "csv") == "csv":
        text = _csv(BRANCH_COLUMNS, rows)
    else:
        doc = _header(_config(args))
        doc["branches"] = [{k: (_jfloat(v) if isinstance(v, float) else v) for k, v in r.items()}
                           for r in rows]
        text = _json(doc)
    _emit(text, args)
    return EXIT_OK


def parse_grid(spec: str) -> list:
    """Grid points as a list of dicts in row-major order of the axes."""
    spec = (spec or "").strip()
    if not spec:
        return []
    axes = []
    for part in spec.split(","):
        if "=" not in part:
            raise UsageError(f"grid axis {part!r} lacks NAME=")
        name, rng = (s.strip() for s in part.split("=", 1))
        if name not in ("lambda", "eta") and name not in {f"c{i}" for i in range(1, 10)}:
            raise UsageError(f"unknown grid axis {name!r}")
        if ":" in rng:
            bits = rng.split(":")
            if len(bits) != 3:
                raise UsageError(f"range {rng!r} is START:STOP:NUM")
            a, b, n = float(bits[0]), float(bits[1]), int(bits[2])
            vals = [float(v) for v in np.linspace(a, b, n)] if n > 0 else []
        else:
            vals = [float(v) for v in rng.split(";") if v.strip()]
        axes.append((name, vals))
    pts = [{}]
    for name, vals in axes:
        pts = [dict(p, **{name: v}) for p in pts for v in vals]
    return pts


def _scan_point(task):
    idx, point, base, order, starts, seed = task
    lam = point.get("lambda", 0.0)
    eta = point.get("eta", 0.0)
    ckeys = {k: v for k, v in point.items() if k.startswith("c")}
    if base is not None or ckeys:
        vals = list(base) if base is not None else [Fraction(0)] * 9
        for k, v in ckeys.items():
            vals[int(k[1:]) - 1] = Fraction(v)
        e = LdGCoefficients.from_sequence(vals).expansion()
        cdesc = ";".join(format_rational(v) for v in vals)
    else:
        e = reduced6_expansion(Fraction(-lam)) if order == 6 else reduced8_expansion(Fraction(lam), Fraction(eta))
        cdesc = ""
    try:
        mins = minimize_classify(e, starts, seed)
    except NonConvexError as exc:
        return {"index": idx, "error": str(exc), "point": point}
    vals = [m.value for m in mins]
    vmin = min(vals) if vals else None
    low = [m for m in mins if vmin is not None and abs(m.value - vmin) <= 1e-9 * max(1.0, abs(vmin))]
    t3s = sorted({round(abs(m.t3), 9) for m in low})  # x -> -x pairs are not degeneracy
    window = bool(lam > 0 and -27 / 4 < eta < 0) if not cdesc and order == 8 else None
    return {"index": idx, "lambda": lam, "eta": eta, "c": cdesc, "n_minima": len(mins),
            "labels": ";".join(m.label for m in mins), "min_value": vmin,
            "t2_values": ";".join(format(m.t2, ".17g") for m in mins),
            "t3_values": ";".join(format(m.t3, ".17g") for m in mins),
            "t3_degenerate": len(low) > 1 and len(t3s) > 1, "window": window}


def run_scan(args):
    pts = parse_grid(args.grid)
    base = None
    if args.input or args.c:
        base = list(_read_coefficients(args).as_tuple())
    tasks = [(i, p, base, args.order, args.starts, args.seed) for i, p in enumerate(pts)]
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_scan_point, tasks, chunksize=1))
    else:
        rows = [_scan_point(t) for t in tasks]
    rows.sort(key=lambda r: r["index"])
    bad = [r for r in rows if "error" in r]
    if bad:
        print(f"non-convex leading form at grid point {bad[0]['point']}: {bad[0]['error']}",
              file=sys.stderr)
        return EXIT_NONCONVEX
    if (args.format or "csv") == "csv":
        text = _csv(SCAN_COLUMNS, rows)
    else:
        doc = _header(_config(args))
        doc["rows"] = [{k: (_jfloat(v) if isinstance(v, float) else v) for k, v in r.items()}
                       for r in rows]
        text = _json(doc)
    _emit(text, args)
    return EXIT_OK


def molien_rows(max_degree: int) -> list:
    if not 0 <= max_degree <= 8:
        raise UsageError("--max-degree must be in 0..8 for the rank cross-check")
    inv = molien_series("invariants", max_degree)
    cov = molien_series("covariants", max_degree)
    rows = []
    for d in range(max_degree + 1):
        rows.append({"degree": d, "invariants_molien": inv[d], "covariants_molien": cov[d],
                     "invariants_rank": independent_count(d, "invariants") if d else 1,
                     "covariants_rank": independent_count(d, "covariants") if d else 0,
                     "labels": ";".join(f.label for f in catalog(d)) if d else ""})
    return rows


def run_molien(args):
    rows = molien_rows(args.max_degree)
    if (args.format or "csv") == "csv":
        text = _csv(MOLIEN_COLUMNS, rows)
    else:
        doc = _header(_config(args))
        doc["rows"] = rows
        text = _json(doc)
    _emit(text, args)
    return EXIT_OK


def run_covariants(args):
    fields = catalog(args.degree) if args.degree is not None else catalog()
    rows = [{"label": f.label, "degree": f.degree, "t2_power": f.t2_power,
             "t3_power": f.t3_power, "base": f.base, "covariant": bool(check_covariance(f)[0])}
            for f in fields]
    if (args.format or "csv") == "csv":
        text = _csv(COVARIANT_COLUMNS, rows)
    else:
        doc = _header(_config(args))
        doc["covariants"] = rows
        text = _json(doc)
    _emit(text, args)
    return EXIT_OK if all(r["covariant"] for r in rows) else EXIT_VERIFY


COMMANDS = {"reduce": run_reduce, "verify": run_verify, "branches": run_branches,
            "scan": run_scan, "molien": run_molien, "covariants": run_covariants}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ldgnormal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegimeError, UnreachableTarget) as exc:
        print(f"ldgnormal: regime: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except ValueError as exc:
        print(f"ldgnormal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
